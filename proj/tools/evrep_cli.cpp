// evrep: batch front-end for coherent-state spin tomography.
//
// Exit status: 0 on success, 1 on usage or input errors, 2 when a
// validation (conditioning, probability constraints, kernel checks) fails.

#include "evrep/evrep.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace evrep;

constexpr int exit_ok = 0;
constexpr int exit_input = 1;
constexpr int exit_validation = 2;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("EVREP_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::invalid_argument("EVREP_SEED is not an unsigned integer");
    }
  }
  return 0;
}

Quorum load_quorum(const std::string& path) {
  const auto file = io::read_quorum_file(path);
  return build_quorum(file.scheme);
}

int cmd_quorum(int two_s_value, const std::string& out, const std::vector<double>& thetas,
               const std::vector<double>& offsets) {
  const TwoS two_s(two_s_value);
  const auto standard = standard_directions(two_s);
  const auto scheme = DirectionScheme::from_cones(
      two_s, thetas.empty() ? standard.cone_thetas() : std::vector<Real>(thetas.begin(), thetas.end()),
      offsets.empty() ? standard.cone_phi_offsets() : std::vector<Real>(offsets.begin(), offsets.end()));
  const auto report = condition_report(scheme);
  nlohmann::json j = io::condition_to_json(report);
  j["two_s"] = two_s.value();
  j["directions"] = scheme.size();
  std::cout << j.dump(2) << "\n";
  if (report.singular) {
    std::cerr << "error: direction scheme is ill-conditioned; no quorum file written\n";
    return exit_validation;
  }
  io::write_quorum_file(out, scheme, report.condition_number);
  return exit_ok;
}

int cmd_simulate(const std::string& quorum_path, const std::string& state_path, std::optional<std::int64_t> shots,
                 std::optional<std::uint64_t> seed, const std::string& out) {
  const Quorum q = load_quorum(quorum_path);
  const DensityMatrix rho(io::read_operator_file(state_path));
  if (rho.dim() != q.dim()) throw std::invalid_argument("state dimension does not match quorum");
  auto p = exact_probabilities(q, rho);
  if (shots) p = sample_counts(p, *shots, seed ? *seed : default_seed());
  std::ofstream f(out);
  if (!f) throw io::FormatError("cannot write " + out);
  io::write_probabilities(f, q.scheme(), p);
  return exit_ok;
}

int cmd_reconstruct(const std::string& quorum_path, const std::string& probs_path, bool psd_repair,
                    const std::string& out, const std::string& reference_path) {
  const Quorum q = load_quorum(quorum_path);
  std::ifstream in(probs_path);
  if (!in) throw io::FormatError("cannot open " + probs_path);
  const auto p = io::read_probabilities(in, q.scheme());
  const auto validation = validate_probabilities(q, p);
  const auto estimate = reconstruct_density(q, p);

  nlohmann::json j;
  j["validation"] = io::validation_to_json(validation);
  j["trace"] = double(estimate.trace);
  j["trace_residual"] = double(std::abs(estimate.trace - 1));
  j["min_eigenvalue"] = double(estimate.min_eigenvalue);
  j["physical"] = estimate.physical();

  HermitianOperator result = estimate.rho;
  if (psd_repair) {
    result = psd_project(estimate.rho).op();
    j["psd_repaired"] = true;
  }
  if (!reference_path.empty()) {
    const auto reference = io::read_operator_file(reference_path);
    j["fidelity"] = double(fidelity(reference, result));
    j["max_error"] = double(max_norm_distance(reference, result));
  }
  io::write_state_file(out, result);
  std::cout << j.dump(2) << "\n";
  return validation.ok() ? exit_ok : exit_validation;
}

int cmd_check(const std::string& quorum_path, const std::string& out, const std::vector<double>& axis_in,
              double angle, double perturb) {
  const Quorum q = load_quorum(quorum_path);
  Vec3 axis = default_probe_axis();
  if (!axis_in.empty()) {
    if (axis_in.size() != 3) throw std::invalid_argument("--axis takes three components");
    axis = Vec3(axis_in[0], axis_in[1], axis_in[2]);
  }
  auto kernels = KernelPair::from(q);
  if (perturb != 0) {
    // Negative control: a non-Hermitian kick to one dual kernel.
    kernels.dual.front()(0, kernels.dual.front().cols() - 1) += Complex(perturb, 0);
  }
  const auto report = run_sw_checks(kernels, is_cone_layout(q), axis, angle);
  const auto j = io::check_report_to_json(q.two_s(), report);
  if (!out.empty()) io::write_text(out, j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
  return report.pass() ? exit_ok : exit_validation;
}

int cmd_evolve(const std::string& quorum_path, const std::string& state_path, const std::string& hamiltonian_path,
               double t, double dt, std::size_t every, bool oracle, const std::string& out) {
  const Quorum q = load_quorum(quorum_path);
  const DensityMatrix rho0(io::read_operator_file(state_path));
  const auto h = io::read_operator_file(hamiltonian_path);
  if (rho0.dim() != q.dim() || h.dim() != q.dim())
    throw std::invalid_argument("state or Hamiltonian dimension does not match quorum");
  const auto g = evolution_generator(q, h);
  const auto p0 = exact_probabilities(q, rho0);

  std::ofstream f(out);
  if (!f) throw io::FormatError("cannot write " + out);
  io::write_trajectory_header(f, q.size());
  Real max_error = 0;
  Real normalization_drift = 0;
  propagate_observed(g, p0, t, dt, every, [&](Real time, const RVector& p) {
    io::write_trajectory_row(f, time, p);
    normalization_drift = std::max(
        normalization_drift, std::abs(normalization_functional(q, ProbabilityVector(p)) - 1));
    if (oracle) max_error = std::max(max_error, (p - exact_propagate(q, rho0, h, time).values()).cwiseAbs().maxCoeff());
  });

  nlohmann::json j{{"steps", detail::step_count(t, dt)}, {"normalization_drift", double(normalization_drift)}};
  if (oracle) j["max_error_vs_exact"] = double(max_error);
  std::cout << j.dump(2) << "\n";
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coherent-state spin tomography and the expectation-value representation"};
  app.require_subcommand(1);

  int two_s = 0;
  std::string out, quorum_path, state_path, probs_path, hamiltonian_path, reference_path;
  std::vector<double> thetas, offsets, axis;
  std::optional<std::int64_t> shots;
  std::optional<std::uint64_t> seed;
  bool psd_repair = false, oracle = false;
  double angle = double(default_probe_angle), perturb = 0, t = 0, dt = 1e-3;
  std::size_t every = 1;

  auto* quorum = app.add_subcommand("quorum", "Build a direction scheme and write the quorum file");
  quorum->add_option("--two-s", two_s, "Twice the spin quantum number")->required();
  quorum->add_option("-o,--out", out, "Quorum file to write")->required();
  quorum->add_option("--cone-thetas", thetas, "Comma-separated cone opening angles (radians)")->delimiter(',');
  quorum->add_option("--phi-offsets", offsets, "Comma-separated per-cone azimuth offsets (radians)")->delimiter(',');

  auto* simulate = app.add_subcommand("simulate", "Stern-Gerlach probabilities for a state");
  simulate->add_option("--quorum", quorum_path)->required();
  simulate->add_option("--state", state_path)->required();
  simulate->add_option("--shots", shots, "Sample this many shots per direction");
  simulate->add_option("--seed", seed, "RNG seed (default: $EVREP_SEED or 0)");
  simulate->add_option("-o,--out", out)->required();

  auto* reconstruct = app.add_subcommand("reconstruct", "Linear state reconstruction from probabilities");
  reconstruct->add_option("--quorum", quorum_path)->required();
  reconstruct->add_option("--probs", probs_path)->required();
  reconstruct->add_flag("--psd-repair", psd_repair, "Project the estimate onto density matrices");
  reconstruct->add_option("--reference", reference_path, "State file to compare against");
  reconstruct->add_option("-o,--out", out)->required();

  auto* check = app.add_subcommand("check", "Verify the kernel properties of a quorum");
  check->add_option("--quorum", quorum_path)->required();
  check->add_option("-o,--out", out, "Report file to write");
  check->add_option("--axis", axis, "Rotation axis for the covariance probe")->delimiter(',');
  check->add_option("--angle", angle, "Rotation angle for the covariance probe");
  check->add_option("--perturb-duals", perturb, "Inject a non-Hermitian perturbation (negative control)");

  auto* evolve = app.add_subcommand("evolve", "Propagate probabilities under a Hamiltonian");
  evolve->add_option("--quorum", quorum_path)->required();
  evolve->add_option("--state", state_path)->required();
  evolve->add_option("--hamiltonian", hamiltonian_path)->required();
  evolve->add_option("--t", t, "Final time")->required();
  evolve->add_option("--dt", dt, "Time step")->required();
  evolve->add_option("--every", every, "Write every k-th step");
  evolve->add_flag("--oracle", oracle, "Report the error against exact unitary propagation");
  evolve->add_option("-o,--out", out)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*quorum) return cmd_quorum(two_s, out, thetas, offsets);
    if (*simulate) return cmd_simulate(quorum_path, state_path, shots, seed, out);
    if (*reconstruct) return cmd_reconstruct(quorum_path, probs_path, psd_repair, out, reference_path);
    if (*check) return cmd_check(quorum_path, out, axis, angle, perturb);
    if (*evolve) return cmd_evolve(quorum_path, state_path, hamiltonian_path, t, dt, every, oracle, out);
  } catch (const IllConditionedScheme& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_validation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input;
  }
  return exit_input;
}
