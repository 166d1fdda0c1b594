#include "krein/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <ostream>
#include <thread>

#include "CLI11.hpp"
#include "krein/instances.hpp"
#include "krein/io.hpp"
#include "krein/report.hpp"

namespace krein {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::vector<std::string> manifests;
  std::string j_path, a_path, v_path;
  std::vector<int> signature;
  std::vector<std::string> tol;
  std::string output;
  bool omit_timing = false;
  int jobs = 1;

  // per-command
  std::string point;
  int decades = 3;
  std::string theorem;
  double b = 0.0;
  bool unbounded_nu = false;
  std::string region;
  std::string export_path;
  int count = 256;
  std::string spectrum_csv, growth_csv, region_csv;

  std::string kind = "random_nonnegative";
  std::uint64_t seed = 0;
  int dim = 4;
  int positive = -1;
  int kernel = 0;
  double floor = 0.0;
  int block_size = 2;
  double scale = 1.0;
  double coupling = 1.0;
  double sign_change = 0.0;
  std::vector<double> potential;
  bool mix = false;
  std::string out_dir;
};

struct JobResult {
  json report;
  int code = kExitPass;
};

int outcome_code(Outcome o) {
  switch (o) {
    case Outcome::Pass: return kExitPass;
    case Outcome::Fail: return kExitViolation;
    case Outcome::Indeterminate: return kExitIndeterminate;
  }
  return kExitIndeterminate;
}

int error_code(const Error& e) {
  if (e.is_numerical()) return kExitIndeterminate;
  if (e.kind() == ErrorKind::Precondition) return kExitViolation;
  return kExitUsage;
}

json error_object(std::string_view kind, const std::string& message) {
  return {{"kind", kind}, {"message", message}};
}

Tolerances resolve_tolerances(const Options& o, const Manifest& m) {
  Tolerances t;
  if (const char* env = std::getenv("KREIN_TOL_OVERRIDE"); env && *env) {
    json j;
    try {
      j = json::parse(env);
    } catch (const json::exception& e) {
      throw Error(ErrorKind::InvalidInput, std::string("KREIN_TOL_OVERRIDE is not valid JSON: ") + e.what());
    }
    t = apply_tolerance_overrides(t, j);
  }
  t = apply_tolerance_overrides(t, m.tolerances);
  json cli = json::object();
  for (const std::string& kv : o.tol) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::InvalidInput, "--tol expects key=value, got '" + kv + "'");
    try {
      const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
      if (key.rfind("quadrature", 0) == 0)
        cli[key] = std::stoi(value);
      else
        cli[key] = std::stod(value);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidInput, "--tol value in '" + kv + "' is not a number");
    }
  }
  return apply_tolerance_overrides(t, cli);
}

struct Loaded {
  std::optional<FundamentalSymmetry> j;
  std::optional<KreinOperator> a;
  std::optional<KreinOperator> v;
  json inputs = json::object();
};

Loaded load(const Manifest& m, const Tolerances& tol, bool need_a, bool need_v) {
  Loaded l;
  if (m.j_path) {
    l.j = FundamentalSymmetry::from_matrix(read_matrix_market(*m.j_path), tol);
    l.inputs["J"] = {{"path", m.j_path->generic_string()}, {"sha256", file_sha256(*m.j_path)}};
  } else if (m.signature) {
    l.j = FundamentalSymmetry::from_signature(m.signature->first, m.signature->second);
    l.inputs["J"] = {{"signature", {m.signature->first, m.signature->second}}};
  } else if (need_a) {
    throw Error(ErrorKind::InvalidInput, "no fundamental symmetry given (J path or signature)");
  }
  if (need_a) {
    if (!m.a_path) throw Error(ErrorKind::InvalidInput, "no operator A given");
    l.a.emplace(read_matrix_market(*m.a_path), *l.j, tol);
    l.inputs["A"] = {{"path", m.a_path->generic_string()}, {"sha256", file_sha256(*m.a_path)}};
  }
  if (m.v_path) {
    l.v.emplace(read_matrix_market(*m.v_path), *l.j, tol);
    l.inputs["V"] = {{"path", m.v_path->generic_string()}, {"sha256", file_sha256(*m.v_path)}};
  } else if (need_v) {
    throw Error(ErrorKind::InvalidInput, "this command needs a perturbation V");
  }
  return l;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write '" + path.string() + "'");
  out << text;
}

void write_spectrum_csv(const fs::path& path, const SpectralDecomposition& d) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write '" + path.string() + "'");
  out << "re,im,type\n";
  char buf[96];
  for (const auto& c : d.clusters()) {
    const SignType t = c.is_real ? classify_real_point(d, c.value.real()).type : SignType::NonReal;
    for (const Complex& z : c.members) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,", z.real(), z.imag());
      out << buf << to_string(t) << "\n";
    }
  }
}

void write_growth_csv(const fs::path& path, const GrowthReport& g) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write '" + path.string() + "'");
  out << "y,resolvent_norm\n";
  char buf[96];
  for (const auto& s : g.samples) {
    const double y = g.point ? s.lambda.imag() : std::abs(s.lambda);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", y, s.norm);
    out << buf;
  }
}

EnclosureRegion region_for(const Options& o, const Manifest& m) {
  if (!o.region.empty()) return parse_region(o.region);
  if (m.region) return *m.region;
  throw Error(ErrorKind::InvalidInput, "no region given (--region or manifest 'region')");
}

// Fills report["verdicts"], ["evidence"], ["outcome"] and returns the exit code.
int run_command(const std::string& cmd, const Options& o, const Manifest& m, const Tolerances& tol,
                json& report) {
  json& verdicts = report["verdicts"];
  json& evidence = report["evidence"];
  verdicts = json::object();
  evidence = json::object();

  if (cmd == "region") {
    const EnclosureRegion k = region_for(o, m);
    verdicts["region"] = region_to_json(k);
    evidence["diameter"] = k.diameter();
    evidence["has_interior"] = k.has_interior();
    if (!o.export_path.empty()) {
      std::ofstream out(o.export_path);
      if (!out) throw Error(ErrorKind::InvalidInput, "cannot write '" + o.export_path + "'");
      write_boundary_csv(out, k, o.count);
      evidence["export"] = {{"path", o.export_path}, {"samples", k.is_empty() ? 0 : o.count}};
    }
    report["outcome"] = "pass";
    return kExitPass;
  }

  if (cmd == "gen") {
    InstanceSpec spec;
    spec.kind = instance_kind_from_string(o.kind);
    spec.seed = o.seed;
    spec.dimension = o.dim;
    spec.positive_dimension = o.positive;
    spec.kernel_dimension = o.kernel;
    spec.eigenvalue_floor = o.floor;
    spec.block_size = o.block_size;
    spec.perturbation_scale = o.scale;
    spec.coupling_scale = o.coupling;
    spec.sign_change = o.sign_change;
    spec.potential = o.potential;
    spec.mix_basis = o.mix;
    const Instance inst = generate(spec);
    if (o.out_dir.empty()) throw Error(ErrorKind::InvalidInput, "gen needs --out DIR");
    const fs::path dir = o.out_dir;
    fs::create_directories(dir);
    Manifest out;
    write_matrix_market(dir / "J.mtx", inst.j.matrix());
    write_matrix_market(dir / "A.mtx", inst.a);
    out.j_path = "J.mtx";
    out.a_path = "A.mtx";
    json files = {{"J", file_sha256(dir / "J.mtx")}, {"A", file_sha256(dir / "A.mtx")}};
    if (inst.v) {
      write_matrix_market(dir / "V.mtx", *inst.v);
      out.v_path = "V.mtx";
      files["V"] = file_sha256(dir / "V.mtx");
    }
    write_file(dir / "manifest.json", manifest_to_json(out).dump(2) + "\n");
    verdicts["instance"] = {{"kind", to_string(spec.kind)}, {"seed", spec.seed}, {"dimension", spec.dimension}};
    evidence["files"] = files;
    evidence["directory"] = dir.generic_string();
    report["seeds"] = json::array({spec.seed});
    report["outcome"] = "pass";
    return kExitPass;
  }

  const bool need_v = cmd == "perturb";
  Loaded l = load(m, tol, true, need_v);
  report["inputs"] = l.inputs;
  const KreinOperator& a = *l.a;

  if (cmd == "check") {
    const SelfAdjointCheck c = is_selfadjoint(a);
    verdicts["selfadjoint"] = c;
    evidence["j"] = {{"hermitian_residual", l.j->hermitian_residual()},
                     {"involution_residual", l.j->involution_residual()},
                     {"signature", {l.j->positive_index(), l.j->negative_index()}}};
    bool ok = c.selfadjoint;
    if (l.v) {
      const SelfAdjointCheck cv = is_selfadjoint(*l.v);
      verdicts["perturbation_selfadjoint"] = cv;
      ok = ok && cv.selfadjoint;
    }
    report["outcome"] = ok ? "pass" : "fail";
    return ok ? kExitPass : kExitViolation;
  }

  if (cmd == "verify") {
    const EnclosureRegion k = region_for(o, m);
    const KreinOperator op = l.v ? KreinOperator(a.matrix() + l.v->matrix(), *l.j, tol) : a;
    const SpectralDecomposition d = decompose(op);
    const EnclosureCertificate cert = verify_enclosure(d, k);
    verdicts["enclosure"] = cert;
    evidence["spectrum"] = spectrum_json(d);
    if (k.has_interior()) {
      try {
        const LocalDecomposition ld = local_decomposition(d, Neighborhood::interior(dilate(k, 1.05)));
        verdicts["local_decomposition"] = ld;
        if (ld.outcome == Outcome::Pass) evidence["lower_bound_gamma"] = lower_bound_gamma(op, ld, 200, 7);
        report["seeds"] = json::array({7});
      } catch (const Error& e) {
        verdicts["local_decomposition"] = {{"error", error_object(to_string(e.kind()), e.what())}};
      }
    }
    report["outcome"] = to_string(cert.outcome);
    return outcome_code(cert.outcome);
  }

  const SpectralDecomposition d = decompose(a);
  evidence["spectrum"] = spectrum_json(d);

  if (cmd == "classify") {
    json points = json::array();
    if (!o.point.empty()) {
      points.push_back(classify_real_point(d, std::stod(o.point)));
    } else {
      for (const auto& c : d.clusters())
        if (c.is_real) points.push_back(classify_real_point(d, c.value.real()));
        else points.push_back({{"value", complex_json(c.value)}, {"type", "NonReal"}});
    }
    verdicts["points"] = points;
    if (!o.spectrum_csv.empty()) write_spectrum_csv(o.spectrum_csv, d);
    report["outcome"] = "pass";
    return kExitPass;
  }

  if (cmd == "nonneg") {
    const NonnegVerdict spectral = spectral_nonnegativity(d);
    const NonnegVerdict root = root_vector_nonnegativity(d);
    verdicts["direct"] = direct_nonnegativity(a);
    verdicts["spectral"] = spectral;
    verdicts["root_vector"] = root;
    int code;
    if (spectral.outcome == Outcome::Indeterminate || root.outcome == Outcome::Indeterminate ||
        !spectral.direct_agrees || !root.direct_agrees)
      code = kExitIndeterminate;
    else
      code = spectral.is_nonnegative ? kExitPass : kExitViolation;
    report["outcome"] = code == kExitPass ? "pass" : code == kExitViolation ? "fail" : "indeterminate";
    return code;
  }

  if (cmd == "similar") {
    const SimilarityResult s = hilbert_similarity(d);
    verdicts["similarity"] = s;
    const int code = s.constructed ? kExitPass : s.blocking.empty() ? kExitIndeterminate : kExitViolation;
    report["outcome"] = code == kExitPass ? "pass" : code == kExitViolation ? "refused" : "indeterminate";
    return code;
  }

  if (cmd == "growth") {
    std::optional<double> point;
    if (!o.point.empty() && o.point != "inf" && o.point != "infinity") {
      try {
        point = std::stod(o.point);
      } catch (const std::exception&) {
        throw Error(ErrorKind::InvalidInput, "--point must be a real number or 'inf'");
      }
    }
    const GrowthReport g = growth_order_at(d, point, o.decades);
    verdicts["growth"] = g;
    if (!o.growth_csv.empty()) write_growth_csv(o.growth_csv, g);
    report["outcome"] = "pass";
    return kExitPass;
  }

  if (cmd == "tau") {
    const TauResult t = compute_tau(d);
    verdicts["tau"] = t;
    const bool agree = t.cross_residual <= tol.tau_tol(t.tau);
    evidence["routes_agree"] = agree;
    report["outcome"] = agree ? "pass" : "indeterminate";
    return agree ? kExitPass : kExitIndeterminate;
  }

  if (cmd == "perturb") {
    const KreinOperator& v = *l.v;
    evidence["blocks"] = split_blocks(v);
    evidence["nu"] = numerical_range_bottom(v);
    EnclosureCertificate cert;
    if (o.theorem == "5.1") {
      cert = block_diagonal_region(a, v);
    } else {
      const TauResult tau = compute_tau(d);
      evidence["tau"] = tau;
      if (o.theorem == "5.3") {
        cert = spectral_skew_region(a, v, tau);
      } else {
        const RelativeBoundFit fit = fit_relative_bound(a, v, tau, {o.b}).front();
        evidence["relative_bound"] = fit;
        const bool refined = o.theorem == "5.4r";
        if (refined) relative_bound_region(tau.tau, numerical_range_bottom(v), fit, true, o.unbounded_nu);
        auto certs = relative_bound_regions(a, v, tau, fit, {o.unbounded_nu, refined});
        cert = refined ? certs.back() : certs.front();
        if (refined && cert.rule != EnclosureRule::RelativeBoundRefined)
          throw Error(ErrorKind::Precondition, "refined region not available for this perturbation");
      }
    }
    verdicts["certificate"] = cert;
    if (!o.region_csv.empty()) {
      std::ofstream out(o.region_csv);
      if (!out) throw Error(ErrorKind::InvalidInput, "cannot write '" + o.region_csv + "'");
      write_boundary_csv(out, cert.region, o.count);
    }
    report["outcome"] = to_string(cert.outcome);
    return outcome_code(cert.outcome);
  }

  throw Error(ErrorKind::InvalidInput, "unknown command '" + cmd + "'");
}

json arguments_json(const std::string& cmd, const Options& o) {
  json a = json::object();
  if (!o.tol.empty()) a["tol"] = o.tol;
  if (cmd == "classify" && !o.point.empty()) a["point"] = o.point;
  if (cmd == "growth") {
    a["point"] = o.point.empty() ? "inf" : o.point;
    a["decades"] = o.decades;
  }
  if (cmd == "perturb") {
    a["theorem"] = o.theorem;
    if (o.theorem == "5.4" || o.theorem == "5.4r") {
      a["b"] = o.b;
      a["unbounded_nu"] = o.unbounded_nu;
    }
  }
  if ((cmd == "verify" || cmd == "region") && !o.region.empty()) a["region"] = o.region;
  if (cmd == "region" && !o.export_path.empty()) a["count"] = o.count;
  if (cmd == "gen") {
    a["kind"] = o.kind;
    a["seed"] = o.seed;
    a["dim"] = o.dim;
    a["positive"] = o.positive;
    a["kernel"] = o.kernel;
    a["floor"] = o.floor;
    a["block_size"] = o.block_size;
    a["scale"] = o.scale;
    a["coupling"] = o.coupling;
    a["sign_change"] = o.sign_change;
    a["potential"] = o.potential;
    a["mix"] = o.mix;
  }
  return a;
}

JobResult run_job(const std::string& cmd, const Options& o, const Manifest& m) {
  const auto start = std::chrono::steady_clock::now();
  JobResult r;
  json& rep = r.report;
  rep["schema"] = 1;
  rep["tool_version"] = kToolVersion;
  rep["command"] = cmd;
  rep["arguments"] = arguments_json(cmd, o);
  if (!m.source.empty()) rep["manifest"] = m.source.generic_string();
  rep["inputs"] = json::object();
  rep["seeds"] = json::array();
  try {
    const Tolerances tol = resolve_tolerances(o, m);
    rep["tolerances"] = tolerances_to_json(tol);
    r.code = run_command(cmd, o, m, tol, rep);
  } catch (const Error& e) {
    r.code = error_code(e);
    rep["error"] = error_object(to_string(e.kind()), e.what());
    rep["outcome"] = r.code == kExitViolation ? "refused" : r.code == kExitIndeterminate ? "indeterminate" : "error";
  }
  rep["exit_code"] = r.code;
  if (!o.omit_timing)
    rep["timing"] = {{"wall_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()}};
  if (m.output) {
    try {
      fs::create_directories(*m.output);
      write_file(*m.output / ("report_" + cmd + ".json"), rep.dump(2) + "\n");
    } catch (const std::exception& e) {
      rep["output_error"] = e.what();
    }
  }
  return r;
}

int worst(int a, int b) { return std::max(a, b); }

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Analysis of operators on finite-dimensional Krein spaces", "krein"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--manifest", o.manifests, "JSON manifest binding J, A, V (repeatable for batches)");
  app.add_option("-J,--J", o.j_path, "fundamental symmetry J (Matrix Market)");
  app.add_option("-A,--A", o.a_path, "operator A (Matrix Market)");
  app.add_option("-V,--V", o.v_path, "perturbation V (Matrix Market)");
  app.add_option("--signature", o.signature, "J = diag(I_p, -I_q)")->expected(2);
  app.add_option("--tol", o.tol, "tolerance override key=value (repeatable)");
  app.add_option("-o,--output", o.output, "write the JSON report here instead of stdout");
  app.add_flag("--omit-timing", o.omit_timing, "leave wall time out of the report");
  app.add_option("--jobs", o.jobs, "parallel jobs over batch manifests")->check(CLI::PositiveNumber);

  app.add_subcommand("check", "J-self-adjointness of A (and V)");
  auto* classify = app.add_subcommand("classify", "sign types of the real eigenvalues");
  classify->add_option("--point", o.point, "classify one eigenvalue");
  classify->add_option("--spectrum-csv", o.spectrum_csv, "export re,im,type");
  app.add_subcommand("nonneg", "non-negativity: direct test and spectral characterisations");
  app.add_subcommand("similar", "Hilbert-space metric making A self-adjoint");
  auto* growth = app.add_subcommand("growth", "resolvent growth at a real point or at infinity");
  growth->add_option("--point", o.point, "real point or 'inf'")->default_str("inf");
  growth->add_option("--decades", o.decades, "decades spanned by the samples")->check(CLI::PositiveNumber);
  growth->add_option("--growth-csv", o.growth_csv, "export y,resolvent_norm");
  app.add_subcommand("tau", "skew tau = |E(R+) - E(R-)| by two routes");
  auto* perturb = app.add_subcommand("perturb", "enclosure region for A + V and its verification");
  perturb->add_option("--theorem", o.theorem, "rule: 5.1 block-diagonal, 5.3 spectral skew, 5.4 relative bound, "
                                              "5.4r refined relative bound")
      ->required()
      ->check(CLI::IsMember({"5.1", "5.3", "5.4", "5.4r"}));
  perturb->add_option("--b", o.b, "relative-bound coefficient b in [0, 1)");
  perturb->add_flag("--unbounded-nu", o.unbounded_nu, "use gamma = sqrt((1+tau)a/(2tau))");
  perturb->add_option("--region-csv", o.region_csv, "export the region boundary");
  perturb->add_option("--count", o.count, "boundary samples")->check(CLI::Range(8, 1 << 20));
  auto* verify = app.add_subcommand("verify", "check A (+V) against a given region K");
  verify->add_option("--region", o.region, "capsule:p,q,r | ball_union:gamma,c0,c1 | empty");
  auto* region = app.add_subcommand("region", "region geometry and boundary export");
  region->add_option("--region", o.region, "capsule:p,q,r | ball_union:gamma,c0,c1 | empty")->required();
  region->add_option("--export", o.export_path, "boundary CSV path");
  region->add_option("--count", o.count, "boundary samples")->check(CLI::Range(8, 1 << 20));
  auto* gen = app.add_subcommand("gen", "generate an instance");
  gen->add_option("--kind", o.kind, "random_nonnegative | random_generic | jordan_at_zero | "
                                    "block_diagonal_pair | sturm_liouville");
  gen->add_option("--seed", o.seed);
  gen->add_option("--dim", o.dim);
  gen->add_option("--positive", o.positive, "p in diag(I_p, -I_q); -1 draws it");
  gen->add_option("--kernel", o.kernel);
  gen->add_option("--floor", o.floor);
  gen->add_option("--block-size", o.block_size);
  gen->add_option("--scale", o.scale);
  gen->add_option("--coupling", o.coupling);
  gen->add_option("--sign-change", o.sign_change);
  gen->add_option("--potential", o.potential);
  gen->add_flag("--mix", o.mix, "conjugate by a random unitary");
  gen->add_option("--out", o.out_dir)->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "krein: " << e.what() << "\n";
    out << json{{"schema", 1}, {"error", error_object("usage", e.what())}}.dump(2) << "\n";
    return kExitUsage;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();

  std::vector<Manifest> jobs;
  try {
    for (const auto& p : o.manifests) jobs.push_back(read_manifest(p));
    if (jobs.empty()) {
      Manifest m;
      if (!o.j_path.empty()) m.j_path = o.j_path;
      if (!o.a_path.empty()) m.a_path = o.a_path;
      if (!o.v_path.empty()) m.v_path = o.v_path;
      if (!o.signature.empty()) m.signature = std::pair{o.signature[0], o.signature[1]};
      jobs.push_back(m);
    } else if (!o.j_path.empty() || !o.a_path.empty() || !o.v_path.empty() || !o.signature.empty()) {
      throw Error(ErrorKind::InvalidInput, "give matrices either through manifests or through --J/--A/--V");
    }
  } catch (const Error& e) {
    err << "krein: " << e.what() << "\n";
    out << json{{"schema", 1}, {"error", error_object(to_string(e.kind()), e.what())}}.dump(2) << "\n";
    return kExitUsage;
  }

  std::vector<JobResult> results(jobs.size());
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(o.jobs), jobs.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) results[i] = run_job(cmd, o, jobs[i]);
  } else {
    std::mutex mu;
    std::size_t next = 0;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        while (true) {
          std::size_t i;
          {
            std::lock_guard lock(mu);
            if (next == jobs.size()) return;
            i = next++;
          }
          results[i] = run_job(cmd, o, jobs[i]);
        }
      });
    for (auto& t : pool) t.join();
  }

  int code = kExitPass;
  json doc;
  if (results.size() == 1) {
    doc = results.front().report;
    code = results.front().code;
  } else {
    doc = {{"schema", 1}, {"tool_version", kToolVersion}, {"command", cmd}, {"batch", json::array()}};
    for (const auto& r : results) {
      doc["batch"].push_back(r.report);
      code = worst(code, r.code);
    }
    doc["exit_code"] = code;
  }
  for (const auto& r : results)
    if (r.report.contains("error")) err << "krein: " << r.report["error"]["message"].get<std::string>() << "\n";

  const std::string text = doc.dump(2) + "\n";
  if (o.output.empty()) {
    out << text;
  } else {
    std::ofstream f(o.output);
    if (!f) {
      err << "krein: cannot write '" << o.output << "'\n";
      return kExitUsage;
    }
    f << text;
  }
  return code;
}

}  // namespace krein
