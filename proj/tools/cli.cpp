#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qwork/channel.hpp"
#include "qwork/entropy.hpp"
#include "qwork/io.hpp"
#include "qwork/landauer.hpp"
#include "qwork/majorize.hpp"
#include "qwork/qmat.hpp"
#include "qwork/sdp.hpp"
#include <nlohmann/json.hpp>

namespace qwork::cli {
namespace {

using nlohmann::json;

constexpr double kBoltzmannJoulePerKelvin = 1.380649e-23;  // exact SI value

/// Input problems detected after command-line parsing but before any real
/// computation (unreadable files, malformed documents, incoherent argument
/// combinations).  Mapped to exit code 2, like a parse failure.
struct LoadError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class F>
auto load_phase(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const LoadError&) {
    throw;
  } catch (const std::exception& e) {
    throw LoadError(e.what());
  }
}

double support_tol_from_env() {
  const char* raw = std::getenv("TOL_SUPPORT");
  if (raw == nullptr) return qmat::kDefaultSupportTol;
  char* end = nullptr;
  const double tol = std::strtod(raw, &end);
  if (end == raw || *end != '\0' || !(tol >= 0.0) || tol >= 1.0)
    throw LoadError("TOL_SUPPORT must be a number in [0, 1)");
  return tol;
}

std::string fixed6(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << v;
  return os.str();
}

std::string sci6(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(6) << v;
  return os.str();
}

void emit(bool as_json, const json& doc, const std::string& text) {
  if (as_json)
    std::cout << doc.dump() << '\n';
  else
    std::cout << text;
}

majorize::Spectrum spectrum_of(const qmat::DensityOperator& rho) {
  return majorize::Spectrum::make(qmat::eig_hermitian(rho.matrix).values);
}

qmat::DensityOperator w_state_reduction() {
  // Two qubits of the three-qubit W state: (1/3)|00><00| + (2/3)|psi+><psi+|.
  qmat::ComplexMatrix m = qmat::ComplexMatrix::Zero(4, 4);
  m(0, 0) = 1.0 / 3.0;
  m(1, 1) = m(2, 2) = m(1, 2) = m(2, 1) = 1.0 / 3.0;
  return qmat::DensityOperator::make(m, {2, 2});
}

struct EntropyArgs {
  std::string state;
  std::string measure;
  std::string cond;
  double eps = 0.0;
  bool has_cond = false;
  bool has_eps = false;
};

int cmd_entropy(const EntropyArgs& a, bool as_json) {
  const double tol = load_phase([] { return support_tol_from_env(); });
  const qmat::DensityOperator rho =
      load_phase([&] { return io::load_state(a.state); });
  load_phase([&]() -> int {
    if (a.has_eps && a.has_cond)
      throw LoadError("--eps applies to unconditional measures only");
    if (a.has_eps && (a.measure == "vn" || a.measure == "hmax"))
      throw LoadError("--eps applies to h0 and hmin only");
    if (a.has_cond && rho.dims.size() != 2)
      throw LoadError(
          "--cond needs a state with exactly two tensor factors in 'dims'");
    return 0;
  });

  json doc{{"measure", a.measure}};
  std::string label = a.measure;
  double bits = 0.0;
  if (a.has_cond) {
    const int cond_on = (a.cond == "A") ? 0 : 1;
    label += (a.cond == "A") ? "(B|A)" : "(A|B)";
    doc["conditioned_on"] = a.cond;
    if (a.measure == "h0") {
      bits = entropy::h_zero_cond(rho, cond_on).bits;
    } else if (a.measure == "hmin") {
      bits = entropy::h_min_cond(rho, cond_on).bits;
    } else if (a.measure == "hmax") {
      bits = entropy::h_max_cond(rho, cond_on).bits;
    } else {  // vn: H(AB) - H(conditioning factor)
      const qmat::ComplexMatrix marg =
          qmat::partial_trace(rho.matrix, rho.dims, {1 - cond_on});
      const auto marg_op =
          qmat::DensityOperator::make(marg, {rho.dims[cond_on]});
      bits = entropy::h_von_neumann(rho).bits -
             entropy::h_von_neumann(marg_op).bits;
    }
  } else if (a.has_eps) {
    const auto params =
        load_phase([&] { return entropy::SmoothingParams::from_epsilon(a.eps); });
    const auto kind = (a.measure == "h0") ? entropy::SmoothKind::zero
                                          : entropy::SmoothKind::min;
    bits = entropy::h_smooth_classical(spectrum_of(rho), params, kind).bits;
    label += "[eps=" + fixed6(a.eps) + "]";
    doc["epsilon"] = a.eps;
  } else if (a.measure == "h0") {
    bits = entropy::h_zero(rho, tol).bits;
  } else if (a.measure == "hmin") {
    bits = entropy::h_min(rho).bits;
  } else if (a.measure == "vn") {
    bits = entropy::h_von_neumann(rho).bits;
  } else {  // hmax, via the conditional form with a trivial side factor
    const auto padded = qmat::DensityOperator::make(rho.matrix, {rho.dim(), 1});
    bits = entropy::h_max_cond(padded, 1).bits;
  }
  doc["bits"] = bits;
  emit(as_json, doc, label + " = " + fixed6(bits) + " bits\n");
  return 0;
}

struct MajorizeArgs {
  std::string spec_a;
  std::string spec_b;
  double lambda = 0.0;
  bool has_lambda = false;
};

int cmd_majorize(const MajorizeArgs& a, bool as_json) {
  const auto p = load_phase([&] { return io::load_spectrum(a.spec_a); });
  const auto q = load_phase([&] { return io::load_spectrum(a.spec_b); });
  const bool maj = majorize::majorizes(p, q);
  const double rate = majorize::absorbed_randomness(p, q);
  json doc{{"majorizes", maj}, {"absorbed_randomness", rate}};
  std::ostringstream text;
  text << "majorizes: " << (maj ? "true" : "false") << '\n'
       << "absorbed_randomness: " << fixed6(rate) << " bits\n";
  if (a.has_lambda) {
    const bool feasible = majorize::lambda_feasible(p, q, a.lambda).feasible;
    doc["lambda"] = a.lambda;
    doc["lambda_feasible"] = feasible;
    text << "lambda_feasible[lambda=" << fixed6(a.lambda)
         << "]: " << (feasible ? "true" : "false") << '\n';
  }
  emit(as_json, doc, text.str());
  return 0;
}

struct WorkboundArgs {
  std::string sigma;
  std::string process;
  std::string dump;
  double temp = 0.0;
  bool sdp_check = false;
  bool has_temp = false;
  bool has_dump = false;
};

int cmd_workbound(const WorkboundArgs& a, bool as_json) {
  const auto sigma = load_phase([&] { return io::load_state(a.sigma); });
  const auto process = load_phase([&] { return io::load_channel(a.process); });
  const auto inst = landauer::build_instance(sigma, process);
  const auto rep = landauer::work_bound(inst, a.sdp_check);

  json doc{{"lambda_opt", rep.lambda_opt},
           {"h_zero_cond_bits", rep.h_zero_cond_bits},
           {"work_min_kt_ln2", rep.work_min_kt_ln2},
           {"units", "kT ln 2"},
           {"gap", rep.gap},
           {"certificate_pass", rep.certificate_report.pass}};
  std::ostringstream text;
  text << "lambda_opt: " << fixed6(rep.lambda_opt) << '\n'
       << "h_zero_cond_bits: " << fixed6(rep.h_zero_cond_bits) << '\n'
       << "work_min: " << fixed6(rep.work_min_kt_ln2) << " kT ln 2\n"
       << "gap: " << sci6(rep.gap) << '\n';
  json residuals = json::object();
  for (const auto& check : rep.certificate_report.checks) {
    residuals[check.name] = check.residual;
    text << "residual[" << check.name << "]: " << sci6(check.residual) << '\n';
  }
  doc["residuals"] = residuals;
  text << "certificate: " << (rep.certificate_report.pass ? "pass" : "FAIL")
       << '\n';
  if (a.sdp_check) {
    doc["sdp_alpha"] = rep.sdp_alpha;
    doc["sdp_gap"] = rep.sdp_gap;
    text << "sdp_alpha: " << fixed6(rep.sdp_alpha) << '\n'
         << "sdp_gap: " << sci6(rep.sdp_gap) << '\n';
  }
  if (a.has_temp) {
    if (!(a.temp > 0.0)) throw LoadError("--temp needs a positive kelvin value");
    const double joules =
        kBoltzmannJoulePerKelvin * a.temp * std::log(2.0) * rep.work_min_kt_ln2;
    doc["temperature_kelvin"] = a.temp;
    doc["work_min_joules"] = joules;
    text << "work_min_joules[T=" << fixed6(a.temp)
         << " K]: " << sci6(joules) << '\n';
  }
  if (a.has_dump) {
    io::WorkDump dump;
    dump.sigma_xr = inst.sigma_xr.projector();
    dump.rho_xpr = inst.rho_xpr;
    dump.alpha = std::exp2(rep.h_zero_cond_bits);
    dump.t_choi = rep.optimal_channel.choi;
    dump.certificate = rep.certificate;
    io::save_work_dump(a.dump, dump);
    doc["dump_path"] = a.dump;
    text << "dump written: " << a.dump << '\n';
  }
  emit(as_json, doc, text.str());
  return rep.certificate_report.pass ? 0 : 1;
}

struct CertifyArgs {
  std::string dump;
  double tol = 1e-7;
};

int cmd_certify(const CertifyArgs& a, bool as_json) {
  const auto dump = load_phase([&] { return io::load_work_dump(a.dump); });
  const auto rep =
      sdp::verify_certificate(dump.sigma_xr, dump.rho_xpr, dump.alpha,
                              dump.t_choi, dump.certificate, a.tol);
  json doc{{"pass", rep.pass},
           {"gap", rep.gap},
           {"tol", rep.tol},
           {"alpha", dump.alpha}};
  json checks = json::object();
  std::ostringstream text;
  for (const auto& check : rep.checks) {
    checks[check.name] = check.residual;
    text << "residual[" << check.name << "]: " << sci6(check.residual) << '\n';
  }
  doc["checks"] = checks;
  text << "gap: " << sci6(rep.gap) << '\n'
       << "certificate: " << (rep.pass ? "pass" : "FAIL") << " (tol "
       << sci6(rep.tol) << ")\n";
  emit(as_json, doc, text.str());
  return rep.pass ? 0 : 1;
}

struct DemoArgs {
  std::string which;
  int n = 0;
  double eps = 0.05;
  bool has_n = false;
};

int cmd_demo(const DemoArgs& a, bool as_json) {
  if (a.which == "wstate") {
    const double bits =
        landauer::special_erasure_with_memory(w_state_reduction()).bits;
    emit(as_json, json{{"demo", "wstate"}, {"h_zero_cond_bits", bits}},
         "H0(S|M) = " + fixed6(bits) + " bits\n");
    return 0;
  }

  if (a.which == "fig1") {
    const int n = a.has_n ? a.n : 10;
    load_phase([&]() -> int {
      if (n < 1 || n > 20) throw LoadError("--n must lie in [1, 20]");
      entropy::SmoothingParams::from_epsilon(a.eps);
      return 0;
    });
    const auto rep = landauer::single_shot_gap_demo(n, a.eps);
    json doc{{"demo", "fig1"},
             {"n", rep.n},
             {"epsilon", rep.epsilon},
             {"identity_bound_bits", rep.identity_bound_bits},
             {"replacement_bound_bits", rep.replacement_bound_bits},
             {"iid_rate_bits", rep.iid_rate_bits},
             {"h_min_smoothed_bits", rep.h_min_smoothed_bits},
             {"h_zero_smoothed_bits", rep.h_zero_smoothed_bits}};
    std::ostringstream text;
    text << "single-shot gap on the spiked spectrum (n = " << rep.n
         << ", eps = " << fixed6(rep.epsilon) << ")\n"
         << "identity_bound: " << fixed6(rep.identity_bound_bits) << " bits\n"
         << "replacement_bound: " << fixed6(rep.replacement_bound_bits)
         << " bits\n"
         << "iid_rate: " << fixed6(rep.iid_rate_bits) << " bits\n"
         << "h_min_smoothed: " << fixed6(rep.h_min_smoothed_bits) << " bits\n"
         << "h_zero_smoothed: " << fixed6(rep.h_zero_smoothed_bits)
         << " bits\n";
    emit(as_json, doc, text.str());
    return 0;
  }

  if (a.which == "iid") {
    const auto params = load_phase(
        [&] { return entropy::SmoothingParams::from_epsilon(a.eps); });
    const auto p = majorize::Spectrum::make({0.75, 0.25});
    const double vn = entropy::h_von_neumann(p).bits;
    json rows = json::array();
    std::ostringstream text;
    text << "smoothed zero-entropy rate of (0.75, 0.25), eps = "
         << fixed6(a.eps) << '\n';
    for (int n : {1, 10, 50, 100, 200}) {
      const double rate =
          entropy::h_smooth_iid_classical(p, n, params).bits / n;
      rows.push_back({{"n", n}, {"h_zero_rate_bits", rate}});
      text << "n = " << std::setw(3) << n << ": h0/n = " << fixed6(rate)
           << " bits\n";
    }
    text << "von Neumann limit: " << fixed6(vn) << " bits\n";
    emit(as_json,
         json{{"demo", "iid"}, {"epsilon", a.eps}, {"rows", rows},
              {"von_neumann_bits", vn}},
         text.str());
    return 0;
  }

  // decouple: replace the spiked spectrum by a pure state and back.
  const int n = a.has_n ? a.n : 3;
  load_phase([&]() -> int {
    if (n < 1 || n > 20) throw LoadError("--n must lie in [1, 20]");
    return 0;
  });
  const auto spec = landauer::spiked_spectrum(n);
  const int d = spec.dim();
  const auto sigma = qmat::DensityOperator::make(
      spec.values.cast<qmat::Complex>().asDiagonal(), {d});
  qmat::ComplexMatrix pure = qmat::ComplexMatrix::Zero(d, d);
  pure(0, 0) = 1.0;
  const auto target = qmat::DensityOperator::make(pure, {d});
  const double forward = landauer::special_decoupling(sigma, target).bits;
  const double reverse = landauer::special_decoupling(target, sigma).bits;
  json doc{{"demo", "decouple"},
           {"n", n},
           {"spiked_to_pure_bits", forward},
           {"pure_to_spiked_bits", reverse}};
  std::ostringstream text;
  text << "decoupling cost, spiked spectrum (n = " << n << ", dim " << d
       << ") -> pure: " << fixed6(forward) << " bits\n"
       << "reverse direction, pure -> spiked: " << fixed6(reverse)
       << " bits\n";
  if (d <= 16) {  // replay the small case through the full engine
    const auto inst = landauer::build_instance(
        sigma, channel::replacement_channel(target, d));
    const auto rep = landauer::work_bound(inst);
    const double engine_gap = std::abs(rep.work_min_kt_ln2 - forward);
    doc["engine_bits"] = rep.work_min_kt_ln2;
    doc["engine_gap"] = engine_gap;
    doc["engine_certificate_pass"] = rep.certificate_report.pass;
    text << "engine agreement: "
         << (rep.certificate_report.pass && engine_gap < 1e-8 ? "pass"
                                                              : "FAIL")
         << " (|engine - formula| = " << sci6(engine_gap) << ")\n";
  }
  emit(as_json, doc, text.str());
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{
      "work-cost bounds, single-shot entropies, and majorization checks "
      "for finite-dimensional erasure processes"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json,
               "emit one JSON object with full-precision values");

  EntropyArgs ea;
  auto* ent = app.add_subcommand(
      "entropy", "entropies of a density operator (file or inline JSON)");
  ent->fallthrough();
  ent->add_option("state", ea.state, "state document: path or inline JSON")
      ->required();
  ent->add_option("--measure", ea.measure, "h0 | hmin | hmax | vn")
      ->required()
      ->check(CLI::IsMember({"h0", "hmin", "hmax", "vn"}));
  auto* cond = ent->add_option(
      "--cond", ea.cond,
      "conditional entropy of the other factor given this one (A or B)");
  cond->check(CLI::IsMember({"A", "B"}));
  auto* eps_ent = ent->add_option(
      "--eps", ea.eps, "trace-distance smoothing radius (h0 and hmin only)");

  MajorizeArgs ma;
  auto* maj = app.add_subcommand(
      "majorize", "majorization and exact randomness rates between spectra");
  maj->fallthrough();
  maj->add_option("spec_a", ma.spec_a, "source spectrum: path or inline JSON")
      ->required();
  maj->add_option("spec_b", ma.spec_b, "target spectrum: path or inline JSON")
      ->required();
  auto* lam = maj->add_option(
      "--lambda", ma.lambda,
      "also decide whether this work rate is feasible for spec_a -> spec_b");

  WorkboundArgs wa;
  auto* wb = app.add_subcommand(
      "workbound", "minimal work of a process on a state, with certificate");
  wb->fallthrough();
  wb->add_option("state", wa.sigma, "input state: path or inline JSON")
      ->required();
  wb->add_option("process", wa.process, "channel document: path or inline JSON")
      ->required();
  wb->add_flag("--sdp-check", wa.sdp_check,
               "cross-check the closed form against the interior-point solver");
  auto* temp = wb->add_option("--temp", wa.temp,
                              "temperature in kelvin; adds the bound in joules");
  auto* dump = wb->add_option("--dump", wa.dump,
                              "write a replayable certificate document here");

  CertifyArgs ca;
  auto* cert = app.add_subcommand(
      "certify", "replay a certificate document written by workbound --dump");
  cert->fallthrough();
  cert->add_option("dump", ca.dump, "certificate document: path or inline JSON")
      ->required();
  cert->add_option("--tol", ca.tol, "residual tolerance (default 1e-7)");

  DemoArgs da;
  auto* demo = app.add_subcommand("demo", "built-in worked examples");
  demo->fallthrough();
  demo->add_option("which", da.which, "wstate | fig1 | iid | decouple")
      ->required()
      ->check(CLI::IsMember({"wstate", "fig1", "iid", "decouple"}));
  auto* nopt = demo->add_option("--n", da.n, "size parameter of the example");
  demo->add_option("--eps", da.eps,
                   "smoothing radius for fig1/iid (default 0.05)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  ea.has_cond = cond->count() > 0;
  ea.has_eps = eps_ent->count() > 0;
  ma.has_lambda = lam->count() > 0;
  wa.has_temp = temp->count() > 0;
  wa.has_dump = dump->count() > 0;
  da.has_n = nopt->count() > 0;

  try {
    if (ent->parsed()) return cmd_entropy(ea, as_json);
    if (maj->parsed()) return cmd_majorize(ma, as_json);
    if (wb->parsed()) return cmd_workbound(wa, as_json);
    if (cert->parsed()) return cmd_certify(ca, as_json);
    return cmd_demo(da, as_json);
  } catch (const LoadError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace qwork::cli
