// Acceptance gate for the sqrtwell artifact.  Each top-level requirement is
// exercised once and reported as a single [PASS]/[FAIL] line with its wall
// time; the process exits nonzero if any criterion fails.
//
//   1. reference spectra     four standard wells reproduce the frozen
//                            high-precision eigenvalues to 1e-7 (under 30 s)
//   2. oracle agreement      independent shooting eigenvalues match the
//                            analytic roots to 1e-5 relative (under 2 min)
//   3. level counting        threshold node counts equal the spectrum sizes
//                            and respect the integral bound
//   4. identity suite        apparent-singularity residual, series-form
//                            equivalence factor, and ODE residuals of the
//                            fundamental solutions
//   5. wavefunction physics  equation residual, node theorem, orthogonality,
//                            and unit normalization for every level
//   6. scattering sweep      phase reality, unitarity, pi-jump placement, and
//                            oracle phase agreement
//   7. figure data emission  the command-line tool produces structurally
//                            sound data files for every plotting subcommand

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sqrtwell/heun.hpp"
#include "sqrtwell/model.hpp"
#include "sqrtwell/oracle.hpp"
#include "sqrtwell/scattering.hpp"
#include "sqrtwell/spectrum.hpp"
#include "sqrtwell/states.hpp"
#include "sqrtwell/util.hpp"

namespace {

using namespace sqrtwell;
namespace fs = std::filesystem;

// The four standard wells (m = hbar = 1, sigma = 2) and their frozen
// high-precision eigenvalues, independently cross-checked at 30 digits.
const PhysParams kWells[4] = {{1.0, 1.0, 4.0, 2.0},
                              {1.0, 1.0, 6.0, 2.0},
                              {1.0, 1.0, 10.0, 2.0},
                              {1.0, 1.0, 15.0, 2.0}};

const std::vector<std::vector<double>> kLevels = {
    {-2.1680511386371134, -0.41663274319365738, -0.029469505337756805},
    {-4.3389492514156982, -1.1206681165856933, -0.23848954351610664,
     -0.0055271765899563699},
    {-9.9736682685906543, -3.2490386896334051, -1.1463321474429978,
     -0.30608880168625158, -0.020164781631226078},
    {-18.843419270413778, -6.9477857487224997, -3.007062709322883,
     -1.2272394509728429, -0.38196939375664711, -0.04351527517554156}};

const std::vector<double> kJumps4 = {0.13139237575688483, 2.362614721421192};

struct Criterion {
  bool ok = false;
  std::string detail;
};

std::string num(double v, const char* fmt = "%.2e") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return std::string(buf);
}

// ---------------------------------------------------------------------------
// 1. Reference spectra.
// ---------------------------------------------------------------------------
Criterion check_reference_spectra() {
  double worst = 0.0;
  for (int w = 0; w < 4; ++w) {
    const SpectrumResult r = find_spectrum(kWells[w]);
    if (r.levels.size() != kLevels[w].size())
      return {false, "well " + std::to_string(w) + ": expected " +
                         std::to_string(kLevels[w].size()) + " levels, got " +
                         std::to_string(r.levels.size())};
    for (std::size_t i = 0; i < r.levels.size(); ++i)
      worst = std::max(worst, std::fabs(r.levels[i].E - kLevels[w][i]));
  }
  return {worst < 1e-7, "18 levels, max |dE| = " + num(worst)};
}

// ---------------------------------------------------------------------------
// 2. Shooting-oracle agreement.
// ---------------------------------------------------------------------------
Criterion check_oracle_agreement() {
  double worst = 0.0;
  int total = 0;
  for (const PhysParams& p : kWells) {
    const SpectrumResult r = find_spectrum(p);
    const std::vector<double> oracle = oracle_eigenvalues(p);
    if (oracle.size() != r.levels.size())
      return {false, "level-count mismatch: analytic " +
                         std::to_string(r.levels.size()) + ", oracle " +
                         std::to_string(oracle.size())};
    for (std::size_t i = 0; i < oracle.size(); ++i) {
      worst = std::max(worst, std::fabs(oracle[i] - r.levels[i].E) /
                                  std::fabs(r.levels[i].E));
      ++total;
    }
  }
  return {worst < 1e-5 && total == 18,
          "18 levels, max rel dev = " + num(worst)};
}

// ---------------------------------------------------------------------------
// 3. Level counting.
// ---------------------------------------------------------------------------
Criterion check_level_counting() {
  const int expected[4] = {3, 4, 5, 6};
  std::string counts;
  for (int w = 0; w < 4; ++w) {
    const int nodes = zero_energy_node_count(kWells[w]);
    const SpectrumResult r = find_spectrum(kWells[w]);
    const int cap = static_cast<int>(std::ceil(r.chadan_bound));
    if (!counts.empty()) counts += "/";
    counts += std::to_string(nodes);
    if (nodes != expected[w] || static_cast<int>(r.levels.size()) != nodes ||
        nodes > cap)
      return {false, "well " + std::to_string(w) + ": nodes " +
                         std::to_string(nodes) + ", levels " +
                         std::to_string(r.levels.size()) + ", cap " +
                         std::to_string(cap)};
  }
  const double cb = chadan_bound(kWells[0]);
  if (std::llround(cb * 100.0) != 331)
    return {false, "integral bound " + num(cb, "%.4f") + " != 3.31 at 2 decimals"};
  return {true, "counts " + counts + ", integral bound " + num(cb, "%.4f")};
}

// ---------------------------------------------------------------------------
// 4. Identity suite.
// ---------------------------------------------------------------------------
Complex heun_P(const HeunParams& h, double z) {
  return h.gamma_h / z + h.delta_h / (z - 1.0) + h.epsilon_h / (z + 1.0);
}

Complex heun_Q(const HeunParams& h, double z) {
  return (h.alpha_h * h.beta_h * z - h.q_h) / (z * (z - 1.0) * (z + 1.0));
}

template <typename F>
double heun_residual(const HeunParams& h, F&& u, double z, double step) {
  const Complex um2 = u(z - 2 * step), um1 = u(z - step), u0 = u(z),
                up1 = u(z + step), up2 = u(z + 2 * step);
  const Complex d1 = (-up2 + 8.0 * up1 - 8.0 * um1 + um2) / (12.0 * step);
  const Complex d2 =
      (-up2 + 16.0 * up1 - 30.0 * u0 + 16.0 * um1 - um2) / (12.0 * step * step);
  const Complex pu = heun_P(h, z) * d1;
  const Complex qu = heun_Q(h, z) * u0;
  const double scale = std::abs(d2) + std::abs(pu) + std::abs(qu);
  return std::abs(d2 + pu + qu) / std::max(scale, 1e-300);
}

PhysParams random_params(std::mt19937& rng) {
  std::uniform_real_distribution<double> v0d(0.5, 20.0), sd(0.25, 4.0),
      md(0.5, 3.0), hd(0.5, 2.0);
  PhysParams p;
  p.m = md(rng);
  p.hbar = hd(rng);
  p.V0 = v0d(rng);
  p.sigma = sd(rng);
  p.V1 = -p.V0;
  return p;
}

Criterion check_identity_suite() {
  std::mt19937 rng(902203u);
  std::uniform_real_distribution<double> ud(0.0, 1.0);

  // (a) the accessory parameter keeps z = 0 an apparent singularity.
  double worst_sing = 0.0;
  for (int draw = 0; draw < 100; ++draw) {
    const PhysParams p = random_params(rng);
    const bool bound = draw % 2 == 0;
    const double E =
        bound ? -2.0 * p.V0 * ud(rng) - 0.01 : 3.0 * p.V0 * ud(rng) + 0.01;
    const int s1 = ud(rng) < 0.5 ? -1 : 1;
    const int s2 = ud(rng) < 0.5 ? -1 : 1;
    worst_sing =
        std::max(worst_sing, apparent_singularity_check(map_to_heun(p, E, s1, s2)));
  }
  if (!(worst_sing < 1e-10))
    return {false, "apparent-singularity residual " + num(worst_sing)};

  // (b) the single-series and two-term-combination forms differ by the
  //     constant factor (alpha2 - alpha1) / (alpha2 + alpha1).  Draws stay in
  //     the window where series summation retains full double precision
  //     (moderate exponents, arguments near the expansion points); the factor
  //     relation itself is parameter-independent.
  double worst_factor = 0.0;
  std::uniform_real_distribution<double> v0b(0.5, 10.0), sb(0.25, 2.0),
      mb(0.5, 2.0), hb(0.5, 2.0);
  for (int draw = 0; draw < 50; ++draw) {
    PhysParams p;
    p.m = mb(rng);
    p.hbar = hb(rng);
    p.V0 = v0b(rng);
    p.sigma = sb(rng);
    p.V1 = -p.V0;
    const bool bound = draw % 2 == 0;
    const double E =
        bound ? -2.0 * p.V0 * ud(rng) - 0.01 : 2.0 * p.V0 * ud(rng) + 0.01;
    const HeunParams h = map_to_heun(p, E, +1, +1);
    const Complex factor = (h.alpha2 - h.alpha1) / (h.alpha2 + h.alpha1);
    const double z1 = -0.9 + ud(rng);  // u1 expands about z = -1
    const double z2 = -0.1 + ud(rng);  // u2 expands about z = +1
    const Complex lhs1 = u1_gauss_combo(h, z1);
    const Complex rhs1 = factor * u1_clausen(h, z1);
    const Complex lhs2 = u2_gauss_combo(h, z2);
    const Complex rhs2 = -factor * u2_clausen(h, z2);
    worst_factor = std::max(
        worst_factor, std::abs(lhs1 - rhs1) / std::max(std::abs(rhs1), 1e-300));
    worst_factor = std::max(
        worst_factor, std::abs(lhs2 - rhs2) / std::max(std::abs(rhs2), 1e-300));
  }
  if (!(worst_factor < 1e-9))
    return {false, "series-equivalence deviation " + num(worst_factor)};

  // (c) both fundamental solutions satisfy the mapped equation.
  double worst_fd = 0.0;
  const struct {
    PhysParams p;
    double E;
  } probes[3] = {{kWells[0], -2.0}, {kWells[3], -3.007062709322883},
                 {kWells[0], 1.0}};
  for (const auto& pr : probes) {
    const HeunParams h = map_to_heun(pr.p, pr.E, +1, +1);
    const auto u1 = [&](double z) { return u1_clausen(h, z); };
    const auto u2 = [&](double z) { return u2_clausen(h, z); };
    for (double z : {-0.6, -0.2, 0.2, 0.4})
      worst_fd = std::max(worst_fd, heun_residual(h, u1, z, 1e-3));
    for (double z : {-0.3, 0.1, 0.5, 0.8})
      worst_fd = std::max(worst_fd, heun_residual(h, u2, z, 1e-3));
  }
  if (!(worst_fd < 1e-6)) return {false, "equation residual " + num(worst_fd)};

  return {true, "sing " + num(worst_sing) + ", factor " + num(worst_factor) +
                    ", ode " + num(worst_fd)};
}

// ---------------------------------------------------------------------------
// 5. Wavefunction physics.
// ---------------------------------------------------------------------------
Criterion check_wavefunction_physics() {
  double worst_fd = 0.0, worst_overlap = 0.0, worst_norm = 0.0;
  for (int w = 0; w < 4; ++w) {
    const PhysParams& p = kWells[w];
    const SpectrumResult r = find_spectrum(p);

    // Shared mesh for cross integrals: the top level has the slowest decay
    // and the most nodes, so its grid covers and resolves every level.
    const std::vector<double> mesh =
        default_wavefunction_grid(p, r.levels.back().E);
    std::vector<std::vector<double>> psi(r.levels.size());

    for (std::size_t i = 0; i < r.levels.size(); ++i) {
      const EnergyLevel& L = r.levels[i];
      const WavefunctionTable t =
          bound_wavefunction(p, L, default_wavefunction_grid(p, L.E));
      if (static_cast<int>(t.nodes.size()) != L.index)
        return {false, "node count " + std::to_string(t.nodes.size()) +
                           " != index " + std::to_string(L.index)};
      worst_norm = std::max(worst_norm, std::fabs(normalize(t).norm - 1.0));

      // Transfer the certified normalization onto the shared mesh.
      const HeunParams h = map_to_heun(p, L.E, +1, +1);
      std::size_t imax = 0;
      for (std::size_t j = 1; j < t.samples.size(); ++j)
        if (std::fabs(t.samples[j].psi) > std::fabs(t.samples[imax].psi)) imax = j;
      const double scale = t.samples[imax].psi /
                           detail::bound_amplitude(p, h, t.samples[imax].x);
      psi[i].resize(mesh.size());
      parallel_for(static_cast<int>(mesh.size()), [&](int j) {
        psi[i][static_cast<std::size_t>(j)] =
            scale * detail::bound_amplitude(p, h, mesh[static_cast<std::size_t>(j)]);
      });

      // Five-point residual of the stationary equation across the interior.
      const std::vector<double> xs = linspace(0.1 * p.sigma, 10.0 * p.sigma, 25);
      const double step = 1e-3;
      const double fac = 2.0 * p.m / (p.hbar * p.hbar);
      double worst_here = 0.0, scale_here = 0.0;
      for (double x : xs) {
        const auto f = [&](double xx) { return detail::bound_amplitude(p, h, xx); };
        const double d2 = (-f(x - 2 * step) + 16.0 * f(x - step) - 30.0 * f(x) +
                           16.0 * f(x + step) - f(x + 2 * step)) /
                          (12.0 * step * step);
        const double rhs = fac * (potential(p, x) - L.E) * f(x);
        worst_here = std::max(worst_here, std::fabs(d2 - rhs));
        scale_here = std::max(scale_here, std::fabs(d2) + std::fabs(rhs));
      }
      worst_fd = std::max(worst_fd, worst_here / std::max(scale_here, 1e-300));
    }

    for (std::size_t i = 0; i < psi.size(); ++i) {
      for (std::size_t j = i + 1; j < psi.size(); ++j) {
        std::vector<double> prod(mesh.size());
        for (std::size_t k = 0; k < mesh.size(); ++k) prod[k] = psi[i][k] * psi[j][k];
        worst_overlap =
            std::max(worst_overlap, std::fabs(simpson_nonuniform(mesh, prod)));
      }
    }
  }
  const bool ok = worst_fd < 1e-6 && worst_overlap < 1e-6 && worst_norm < 1e-8;
  return {ok, "ode " + num(worst_fd) + ", overlap " + num(worst_overlap) +
                  ", |norm-1| " + num(worst_norm)};
}

// ---------------------------------------------------------------------------
// 6. Scattering sweep.
// ---------------------------------------------------------------------------
Criterion check_scattering_sweep() {
  const PhysParams& p = kWells[0];
  const PhaseShiftCurve curve = phase_shift_curve(p, logspace(1e-3, 50.0, 601));

  double worst_imag = 0.0, worst_unitarity = 0.0;
  for (const PhaseShiftPoint& q : curve.points) {
    worst_imag = std::max(worst_imag, std::fabs(q.phase_imag));
    worst_unitarity =
        std::max(worst_unitarity, std::fabs(std::abs(q.B / q.A) - 1.0));
  }
  if (!(worst_imag < 1e-8))
    return {false, "phase imaginary part " + num(worst_imag)};
  if (!(worst_unitarity < 1e-8))
    return {false, "unitarity defect " + num(worst_unitarity)};
  if (curve.jumps.size() != 2)
    return {false, std::to_string(curve.jumps.size()) + " jumps, expected 2"};

  double worst_jump = 0.0;
  for (double ej : curve.jumps) {
    const auto [A, B] = asymptotic_amplitudes(p, ej);
    worst_jump = std::max(
        worst_jump, std::abs(A + B) / std::max(std::abs(A) + std::abs(B), 1e-300));
  }
  if (!(worst_jump < 1e-6)) return {false, "|A+B| at jump " + num(worst_jump)};

  double worst_oracle = 0.0;
  const std::vector<double> probes = logspace(0.3, 30.0, 10);
  std::vector<double> devs(probes.size());
  parallel_for(static_cast<int>(probes.size()), [&](int i) {
    const double E = probes[static_cast<std::size_t>(i)];
    const double a = phase_shift(p, E).delta;
    const double b = oracle_scattering_phase(p, E);
    const double d = std::fmod(std::fabs(a - b), pi);
    devs[static_cast<std::size_t>(i)] = std::min(d, pi - d);
  });
  for (double d : devs) worst_oracle = std::max(worst_oracle, d);
  if (!(worst_oracle < 1e-4))
    return {false, "oracle phase deviation " + num(worst_oracle)};

  return {true, "2 jumps, im " + num(worst_imag) + ", unit " +
                    num(worst_unitarity) + ", oracle " + num(worst_oracle)};
}

// ---------------------------------------------------------------------------
// 7. Figure-data emission through the command-line tool.
// ---------------------------------------------------------------------------
struct Csv {
  std::string comment;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, sep)) out.push_back(tok);
  return out;
}

Csv parse_csv(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("missing data file: " + path.string());
  Csv c;
  std::string line;
  if (!std::getline(f, line) || line.rfind("# ", 0) != 0)
    throw std::runtime_error("bad comment line in " + path.string());
  c.comment = line;
  if (!std::getline(f, line))
    throw std::runtime_error("missing header in " + path.string());
  c.columns = split(line, ',');
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> fields = split(line, ',');
    if (fields.size() != c.columns.size())
      throw std::runtime_error("ragged row in " + path.string());
    std::vector<double> row;
    for (const std::string& s : fields) row.push_back(std::stod(s));
    c.rows.push_back(std::move(row));
  }
  return c;
}

std::vector<double> bracket_values(const std::string& text, const std::string& key) {
  const std::size_t at = text.find(key + "=[");
  if (at == std::string::npos) throw std::runtime_error("missing " + key + "=[...]");
  const std::size_t open = at + key.size() + 2;
  const std::size_t close = text.find(']', open);
  if (close == std::string::npos) throw std::runtime_error("unterminated " + key);
  std::vector<double> out;
  for (const std::string& tok : split(text.substr(open, close - open), ';'))
    if (!tok.empty()) out.push_back(std::stod(tok));
  return out;
}

void run_tool(const std::string& args) {
  const std::string cmd =
      std::string("\"") + SQRTWELL_CLI_PATH + "\" " + args + " > /dev/null";
  if (std::system(cmd.c_str()) != 0)
    throw std::runtime_error("tool invocation failed: " + args);
}

int sign_changes(const std::vector<double>& v, double floor) {
  int count = 0;
  double prev = 0.0;
  for (double y : v) {
    if (std::fabs(y) <= floor) continue;
    if (prev != 0.0 && y * prev < 0.0) ++count;
    prev = y;
  }
  return count;
}

Criterion check_figure_data() {
  const fs::path dir = fs::current_path() / "acceptance_data";
  fs::create_directories(dir);
  const std::string well = "--v0 4 --sigma 2";

  // Potential profile with asymptote overlays.
  const fs::path pot = dir / "potential.csv";
  run_tool("potential " + well + " --samples 200 --out " + pot.string());
  const Csv cp = parse_csv(pot);
  if (cp.columns != std::vector<std::string>{"x", "V", "near_asymptote",
                                             "far_asymptote", "z"} ||
      cp.rows.size() != 200)
    return {false, "potential file malformed"};
  for (std::size_t i = 0; i < cp.rows.size(); ++i) {
    if (!(cp.rows[i][1] < 0.0)) return {false, "potential not attractive"};
    if (i > 0 && !(cp.rows[i][1] > cp.rows[i - 1][1]))
      return {false, "potential not monotone"};
  }
  if (!(cp.rows.front()[2] < cp.rows.front()[1]))
    return {false, "origin asymptote fails to bound the well"};
  if (!(std::fabs(cp.rows.back()[1] - cp.rows.back()[3]) <
        1e-3 * std::fabs(cp.rows.back()[1])))
    return {false, "tail asymptote diverges from the well"};

  // Spectral-function scan bracketing all three roots.
  const fs::path scan = dir / "scan.csv";
  run_tool("spectrum " + well + " --scan --out " + scan.string());
  const Csv cs = parse_csv(scan);
  const std::vector<double> roots = bracket_values(cs.comment, "levels");
  if (roots.size() != 3) return {false, "scan reports wrong root count"};
  for (double root : roots) {
    bool bracketed = false;
    for (std::size_t i = 1; i < cs.rows.size(); ++i)
      if (cs.rows[i - 1][0] <= root && root <= cs.rows[i][0]) {
        bracketed = cs.rows[i - 1][1] * cs.rows[i][1] < 0.0;
        break;
      }
    if (!bracketed) return {false, "scan fails to bracket a root"};
  }

  // Three normalized states obeying the node theorem.
  const fs::path waves = dir / "waves.csv";
  run_tool("wavefunctions " + well + " --xmax 30 --samples 240 --out " +
           waves.string());
  const Csv cw = parse_csv(waves);
  for (int level = 0; level < 3; ++level) {
    std::vector<double> vals;
    for (const std::vector<double>& row : cw.rows)
      if (row[0] == level) vals.push_back(row[3]);
    if (vals.size() != 240) return {false, "wavefunction table incomplete"};
    if (sign_changes(vals, 1e-9) != level)
      return {false, "wavefunction node count violates the node theorem"};
  }

  // Threshold solution with three zeros.
  const fs::path zero = dir / "zero.csv";
  run_tool("zero-energy " + well + " --xmax 40 --samples 300 --out " +
           zero.string());
  const Csv cz = parse_csv(zero);
  if (bracket_values(cz.comment, "zeros").size() != 3)
    return {false, "threshold solution zero count != 3"};
  std::vector<double> zvals;
  for (const std::vector<double>& row : cz.rows) zvals.push_back(row[2]);
  if (sign_changes(zvals, 0.0) != 3)
    return {false, "threshold samples do not change sign three times"};

  // Phase curve with both pi-jumps located.
  const fs::path phase = dir / "phase.csv";
  run_tool("phase-shift " + well + " --out " + phase.string());
  const Csv cf = parse_csv(phase);
  const std::vector<double> jumps = bracket_values(cf.comment, "jumps");
  if (jumps.size() != 2) return {false, "jump count != 2"};
  for (std::size_t i = 0; i < 2; ++i)
    if (!(std::fabs(jumps[i] - kJumps4[i]) < 1e-6 * std::max(1.0, kJumps4[i])))
      return {false, "jump location drifted"};
  for (std::size_t i = 1; i < cf.rows.size(); ++i)
    if (!(std::fabs(cf.rows[i][4] - cf.rows[i - 1][4]) < 0.5 * pi))
      return {false, "lifted phase curve is discontinuous"};

  return {true, "5 data files under " + dir.filename().string() + "/"};
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    Criterion (*fn)();
    double budget_s;  // 0 = unlimited
  };
  const Entry entries[] = {
      {"reference spectra", check_reference_spectra, 30.0},
      {"oracle agreement", check_oracle_agreement, 120.0},
      {"level counting", check_level_counting, 0.0},
      {"identity suite", check_identity_suite, 0.0},
      {"wavefunction physics", check_wavefunction_physics, 0.0},
      {"scattering sweep", check_scattering_sweep, 0.0},
      {"figure data emission", check_figure_data, 0.0},
  };

  int failures = 0;
  int index = 0;
  for (const Entry& e : entries) {
    ++index;
    const auto t0 = std::chrono::steady_clock::now();
    Criterion c;
    try {
      c = e.fn();
    } catch (const std::exception& ex) {
      c = {false, std::string("exception: ") + ex.what()};
    }
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (e.budget_s > 0.0 && dt > e.budget_s) {
      c.ok = false;
      c.detail += " [over " + num(e.budget_s, "%.0f") + " s budget]";
    }
    std::printf("[%s] %d. %-22s (%6.2f s)  %s\n", c.ok ? "PASS" : "FAIL", index,
                e.name, dt, c.detail.c_str());
    if (!c.ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
