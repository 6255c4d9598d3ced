#include "jts/commands.hpp"

#include <algorithm>
#include <iostream>
#include <sstream>

#include "jts/error.hpp"

namespace jts {

namespace {

std::string short_num(const BigReal& x) { return x.to_string(6); }

// Re-raise with the pipeline stage in front of the message.
template <class F>
auto stage(const std::string& name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.code(), name + ": " + e.what(), e.condition(), e.index());
  }
}

Json circle_to_json(const LimitCircleReport& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["tail_ratio_P"] = short_num(r.tail_ratio_P);
  j["tail_ratio_Q"] = short_num(r.tail_ratio_Q);
  j["tail_sum_P"] = r.tail_sum_P.to_string(12);
  j["tail_sum_Q"] = r.tail_sum_Q.to_string(12);
  j["sup_abs_q"] = r.sup_abs_q.to_string(12);
  j["log_concave_from"] = r.log_concave_from;
  j["inverse_b_slope"] = BigReal::from_double(r.inverse_b_slope, 64).to_string(6);
  j["berezanskii_ok"] = r.berezanskii_ok;
  return j;
}

Json matrix_entries(const JacobiMatrix& m) {
  Json j;
  j["b"] = to_json(m.b_entries());
  j["q"] = to_json(m.q_entries());
  return j;
}

std::string spectrum_summary(const SpectrumFile& s) {
  std::ostringstream os;
  os << s.eigenvalues.size() << " eigenvalues for tau = " << (s.tau ? s.tau->to_string() : "?") << " in ["
     << s.window_lo->to_string(8) << ", " << s.window_hi->to_string(8) << "]";
  return os.str();
}

std::vector<BigReal> parse_list(const std::vector<std::string>& xs, Precision bits, const char* field) {
  std::vector<BigReal> out;
  for (const std::string& s : xs) {
    try {
      out.push_back(BigReal::parse(s, bits));
    } catch (const Error&) {
      throw Error(ErrorCode::ParseError, std::string("malformed decimal \"") + s + "\" in " + field, field);
    }
  }
  return out;
}

bool same_tau(const ExtensionParameter& expected, const ExtensionParameter& got, double tol) {
  if (expected.is_infinite() || got.is_infinite()) return expected.is_infinite() && got.is_infinite();
  if (expected.is_zero()) return got.is_zero();
  return abs(expected.value() - got.value()).to_double() < tol;
}

Json tau_check(const ExtensionParameter& expected, const ExtensionParameter& got, double tol) {
  Json j;
  j["expected"] = expected.to_string();
  j["recovered"] = got.to_string();
  if (expected.is_finite() && got.is_finite()) j["error"] = short_num(abs(expected.value() - got.value()));
  j["ok"] = same_tau(expected, got, tol);
  return j;
}

}  // namespace

Window parse_window(const std::string& text, Precision bits) {
  const std::size_t colon = text.find(':', 1);
  if (colon == std::string::npos) throw Error(ErrorCode::ParseError, "window must look like lo:hi", "window");
  Window w;
  try {
    w.lo = BigReal::parse(text.substr(0, colon), bits);
    w.hi = BigReal::parse(text.substr(colon + 1), bits);
  } catch (const Error&) {
    throw Error(ErrorCode::ParseError, "malformed window \"" + text + "\"", "window");
  }
  if (!(w.lo < w.hi)) throw Error(ErrorCode::PreconditionViolated, "window needs lo < hi", "window");
  return w;
}

void deliver(const GlobalOptions& opts, const CommandResult& result) {
  if (opts.out.empty()) {
    std::cout << result.text;
    std::cout.flush();
  } else {
    write_atomic(opts.out, result.text);
  }
  if (!opts.quiet && !result.summary.empty()) std::cerr << result.summary << "\n";
}

MatrixFile generate_matrix_file(const FamilyParams& params, std::size_t length, Precision bits) {
  const JacobiMatrix m = generate(params, length, bits);
  const LimitCircleReport rep = limit_circle_check(m, BigReal::from_double(kDefaultCircleTolerance, bits));
  if (rep.verdict != CircleVerdict::LimitCircle) {
    throw Error(ErrorCode::NotLimitCircle,
                std::string("limit-circle check says ") + to_string(rep.verdict) + " (tail ratio " +
                    short_num(rep.tail_ratio) + ")",
                "limit-circle");
  }
  Json meta = family_metadata(params, m.size());
  meta["limit_circle"] = circle_to_json(rep);
  return MatrixFile::from_matrix(m, std::move(meta));
}

SpectrumFile forward_spectrum(const JacobiMatrix& m, const ExtensionParameter& tau,
                              const std::optional<Window>& window) {
  const Nevanlinna nev(m);
  Spectrum s = window ? find_spectrum(nev, tau, window->lo, window->hi) : find_spectrum_trusted(nev, tau);
  s = normalizing_constants(m, std::move(s));
  SpectrumFile f;
  f.tau = tau;
  f.eigenvalues = s.eigenvalues;
  f.trust_radius = s.trust_radius;
  f.window_lo = s.window_lo;
  f.window_hi = s.window_hi;
  f.normalizing_constants = s.normalizing_constants;
  f.precision_bits = m.precision();
  f.metadata["eigenvalue_count"] = s.eigenvalues.size();
  f.metadata["spectral_mass"] = spectral_mass(s).to_string(20);
  f.metadata["matrix_length"] = m.size();
  return f;
}

Json validation_to_json(const ValidationResult& v) {
  Json j;
  j["overall"] = to_string(v.overall);
  Json reports = Json::array();
  for (const ConditionReport& r : v.reports) {
    Json e;
    e["condition"] = to_string(r.id);
    e["name"] = condition_name(r.id);
    e["status"] = to_string(r.status);
    e["detail"] = r.detail;
    Json ev = Json::object();
    for (const auto& [k, val] : r.evidence) ev[k] = val;
    e["evidence"] = ev;
    reports.push_back(e);
  }
  j["reports"] = reports;
  j["notes"] = v.notes;
  return j;
}

Json reconstruction_to_json(const ReconstructionResult& r) {
  Json j;
  j["tau1"] = r.tau1.to_string();
  j["tau2"] = r.tau2.to_string();
  j["M"] = r.M.to_string();
  j["trusted_length"] = r.trusted_length;
  j["matrix"] = matrix_entries(r.matrix);
  j["full_matrix"] = matrix_entries(r.full_matrix);
  return j;
}

namespace {

Json diagnostics_to_json(const ReconstructionDiagnostics& d) {
  Json j;
  j["requested_length"] = d.requested_length;
  j["lambda_count"] = d.lambda_count;
  j["mu_count"] = d.mu_count;
  j["clamped"] = d.clamped;
  j["mass_deficit"] = short_num(d.mass_deficit);
  j["M_tail_decay"] = short_num(d.M_tail_decay);
  Json st = Json::array();
  for (const CoefficientStability& c : d.stability) {
    st.push_back({{"n", c.n}, {"b_change", short_num(c.b_change)}, {"q_change", short_num(c.q_change)}});
  }
  j["stability"] = st;
  Json est = Json::array();
  for (const BigReal& t : d.tau1_estimates) est.push_back(t.to_string(20));
  j["tau1_estimates"] = est;
  j["tau_spread"] = short_num(d.tau_spread);
  j["warnings"] = d.warnings;
  return j;
}

std::string diagnostics_warnings(const ReconstructionDiagnostics& d) {
  std::string s;
  for (const std::string& w : d.warnings) s += "\nwarning: " + w;
  return s;
}

}  // namespace

CommandResult cmd_gen(const GlobalOptions& opts, const FamilyParams& params, std::size_t length) {
  const MatrixFile f = generate_matrix_file(params, length, opts.bits);
  CommandResult r;
  r.text = dump(to_json(f));
  r.summary = std::string(to_string(params.family)) + " matrix, N = " + std::to_string(f.b.size()) + ", LimitCircle";
  return r;
}

CommandResult cmd_forward(const GlobalOptions& opts, const std::string& matrix_path, const std::string& tau_text,
                          const std::optional<std::string>& window_text) {
  const std::string raw = read_text(matrix_path);
  const MatrixFile mf = read_matrix_file(matrix_path, opts.bits);
  const JacobiMatrix m = mf.matrix(opts.bits);
  const ExtensionParameter tau = ExtensionParameter::parse(tau_text, m.precision());
  std::optional<Window> window;
  if (window_text) window = parse_window(*window_text, m.precision());
  SpectrumFile s = forward_spectrum(m, tau, window);
  s.metadata["matrix_sha256"] = sha256_hex(raw);
  CommandResult r;
  r.text = dump(to_json(s));
  r.summary = spectrum_summary(s);
  return r;
}

CommandResult cmd_invert(const GlobalOptions& opts, const std::string& lambda_path, const std::string& mu_path,
                         std::size_t target_length) {
  const std::string lraw = read_text(lambda_path);
  const std::string mraw = read_text(mu_path);
  const SpectrumFile lf = read_spectrum_file(lambda_path, opts.bits);
  const SpectrumFile mf = read_spectrum_file(mu_path, opts.bits);

  ReconstructOptions ro;
  if (opts.tolerance) ro.stability_tolerance = *opts.tolerance;
  const ReconstructionResult rec = reconstruct(lf.eigenvalues, mf.eigenvalues, target_length, ro);

  Json rep = make_report("invert", opts.bits);
  add_input(rep, "lambda", lambda_path, lraw);
  add_input(rep, "mu", mu_path, mraw);
  rep["target_length"] = target_length;
  rep["results"] = reconstruction_to_json(rec);
  if (lf.tau && mf.tau) {
    rep["results"]["input_taus"] = {{"tau1", lf.tau->to_string()}, {"tau2", mf.tau->to_string()}};
  }
  rep["diagnostics"] = diagnostics_to_json(rec.diagnostics);

  CommandResult r;
  r.text = dump(rep);
  r.summary = "recovered " + std::to_string(rec.trusted_length) + " coefficient pairs, tau1 = " +
              rec.tau1.to_string() + ", tau2 = " + rec.tau2.to_string() + diagnostics_warnings(rec.diagnostics);
  return r;
}

CommandResult cmd_validate(const GlobalOptions& opts, const std::string& lambda_path, const std::string& mu_path) {
  const std::string lraw = read_text(lambda_path);
  const std::string mraw = read_text(mu_path);
  const SpectrumFile lf = read_spectrum_file(lambda_path, opts.bits);
  const SpectrumFile mf = read_spectrum_file(mu_path, opts.bits);
  const ValidationResult v = validate_all(lf.eigenvalues, mf.eigenvalues);

  Json rep = make_report("validate", opts.bits);
  add_input(rep, "lambda", lambda_path, lraw);
  add_input(rep, "mu", mu_path, mraw);
  rep["results"] = validation_to_json(v);

  CommandResult r;
  r.text = dump(rep);
  r.exit_code = v.overall == Status::Fail ? 2 : 0;
  r.summary = std::string("validation ") + to_string(v.overall);
  for (const ConditionReport& c : v.reports) {
    if (c.status == Status::Fail) r.summary += "\n  " + std::string(condition_name(c.id)) + ": " + c.detail;
  }
  return r;
}

CommandResult cmd_roundtrip(const GlobalOptions& opts, const RoundtripParams& p) {
  const Precision bits = opts.bits;
  const ExtensionParameter tau1 = ExtensionParameter::parse(p.tau1, bits);
  const ExtensionParameter tau2 = ExtensionParameter::parse(p.tau2, bits);
  if (tau1 == tau2) throw Error(ErrorCode::PreconditionViolated, "tau1 and tau2 must differ", "distinct-taus");
  std::optional<Window> window;
  if (p.window) window = parse_window(*p.window, bits);
  const double coef_tol = opts.tolerance.value_or(kRoundtripCoefficientTolerance);

  Json rep = make_report("roundtrip", bits);
  Json params = family_metadata(p.family, p.length);
  params["tau1"] = tau1.to_string();
  params["tau2"] = tau2.to_string();
  params["window"] = p.window ? Json(*p.window) : Json("trust");
  params["target_length"] = p.target_length;
  params["coefficient_tolerance"] = BigReal::from_double(coef_tol, 64).to_string(6);
  params["tau_tolerance"] = BigReal::from_double(kRoundtripTauTolerance, 64).to_string(6);
  rep["params"] = params;

  const MatrixFile mf = stage("gen", [&] { return generate_matrix_file(p.family, p.length, bits); });
  const JacobiMatrix m = mf.matrix(bits);
  rep["stages"]["gen"] = {{"length", m.size()}, {"limit_circle", mf.metadata["limit_circle"]["verdict"]}};

  const SpectrumFile sl = stage("forward(tau1)", [&] { return forward_spectrum(m, tau1, window); });
  const SpectrumFile sm = stage("forward(tau2)", [&] { return forward_spectrum(m, tau2, window); });
  rep["stages"]["forward"] = {{"trust_radius", sl.trust_radius.to_string(12)},
                              {"lambda_count", sl.eigenvalues.size()},
                              {"mu_count", sm.eigenvalues.size()},
                              {"lambda_mass", sl.metadata["spectral_mass"]},
                              {"mu_mass", sm.metadata["spectral_mass"]}};

  CommandResult r;
  const ValidationResult v = stage("validate", [&] { return validate_all(sl.eigenvalues, sm.eigenvalues); });
  Json vj = Json::object();
  vj["overall"] = to_string(v.overall);
  for (const ConditionReport& c : v.reports) vj[condition_name(c.id)] = to_string(c.status);
  rep["stages"]["validate"] = vj;
  if (v.overall == Status::Fail) {
    rep["failed_stage"] = "validate";
    rep["results"] = {{"pass", false}};
    r.text = dump(rep);
    r.exit_code = 2;
    r.summary = "roundtrip stopped: validation failed";
    return r;
  }

  ReconstructOptions ro;
  const ReconstructionResult rec =
      stage("invert", [&] { return reconstruct(sl.eigenvalues, sm.eigenvalues, p.target_length, ro); });
  rep["stages"]["invert"] = reconstruction_to_json(rec);
  rep["stages"]["invert"]["diagnostics"] = diagnostics_to_json(rec.diagnostics);

  BigReal worst_b(0L, bits), worst_q(0L, bits);
  Json table = Json::array();
  for (std::size_t n = 1; n <= rec.trusted_length; ++n) {
    const BigReal eb = abs(rec.matrix.b(n) - m.b(n)) / m.b(n);
    // q is often zero, so its error is measured against the local scale max(|q_n|, b_n).
    const BigReal eq = abs(rec.matrix.q(n) - m.q(n)) / max(abs(m.q(n)), m.b(n));
    worst_b = max(worst_b, eb);
    worst_q = max(worst_q, eq);
    table.push_back({{"n", n},
                     {"b_true", m.b(n).to_string()},
                     {"b_recovered", rec.matrix.b(n).to_string(20)},
                     {"b_rel_error", short_num(eb)},
                     {"q_true", m.q(n).to_string()},
                     {"q_recovered", rec.matrix.q(n).to_string(20)},
                     {"q_error", short_num(eq)}});
  }
  const Json t1 = tau_check(tau1, rec.tau1, kRoundtripTauTolerance);
  const Json t2 = tau_check(tau2, rec.tau2, kRoundtripTauTolerance);
  const bool coef_ok = worst_b.to_double() < coef_tol && worst_q.to_double() < coef_tol;
  const bool length_ok = rec.trusted_length > 0;
  const bool pass = coef_ok && length_ok && t1["ok"].get<bool>() && t2["ok"].get<bool>();

  Json res;
  res["coefficients"] = table;
  res["trusted_length"] = rec.trusted_length;
  res["max_b_rel_error"] = short_num(worst_b);
  res["max_q_error"] = short_num(worst_q);
  res["M"] = rec.M.to_string(20);
  res["tau1"] = t1;
  res["tau2"] = t2;
  res["pass"] = pass;
  rep["results"] = res;

  r.text = dump(rep);
  r.exit_code = pass ? 0 : 2;
  r.summary = std::string("roundtrip ") + (pass ? "PASS" : "FAIL") + ": " + std::to_string(rec.trusted_length) +
              " pairs, max b error " + short_num(worst_b) + ", max q error " + short_num(worst_q) +
              ", tau1 = " + rec.tau1.to_string() + ", tau2 = " + rec.tau2.to_string() +
              diagnostics_warnings(rec.diagnostics);
  return r;
}

PlotKind parse_plot_kind(const std::string& name) {
  if (name == "R_function") return PlotKind::RFunction;
  if (name == "measure_staircase") return PlotKind::MeasureStaircase;
  if (name == "eigenvalue_ladder") return PlotKind::EigenvalueLadder;
  throw Error(ErrorCode::ParseError, "unknown plot kind \"" + name + "\"", "kind");
}

CommandResult cmd_plot_data(const GlobalOptions& opts, const PlotParams& p) {
  const Precision bits = opts.bits;
  const auto need_inputs = [&](std::size_t lo, std::size_t hi) {
    if (p.inputs.size() < lo || p.inputs.size() > hi) {
      throw Error(ErrorCode::PreconditionViolated, "wrong number of input files for this plot kind", "inputs");
    }
  };
  std::ostringstream csv;
  CommandResult r;

  switch (p.kind) {
    case PlotKind::RFunction: {
      need_inputs(1, 1);
      const JacobiMatrix m = read_matrix_file(p.inputs[0], bits).matrix(bits);
      const Precision mb = m.precision();
      const ExtensionParameter tau = ExtensionParameter::parse(p.tau, mb);
      std::vector<BigReal> xs = parse_list(p.points, mb, "points");
      if (p.grid) {
        const std::size_t c1 = p.grid->rfind(':');
        if (c1 == std::string::npos || c1 == 0) throw Error(ErrorCode::ParseError, "grid must be lo:hi:count", "grid");
        const Window w = parse_window(p.grid->substr(0, c1), mb);
        long count = 0;
        try {
          count = std::stol(p.grid->substr(c1 + 1));
        } catch (const std::exception&) {
          throw Error(ErrorCode::ParseError, "grid count is not an integer", "grid");
        }
        if (count < 2) throw Error(ErrorCode::PreconditionViolated, "grid needs at least two points", "grid");
        for (long i = 0; i < count; ++i) xs.push_back(w.lo + (w.hi - w.lo) * BigReal(i, mb) / BigReal(count - 1, mb));
      }
      if (xs.empty()) throw Error(ErrorCode::PreconditionViolated, "no sample points; pass --grid or --at", "grid");
      const Nevanlinna nev(m);
      const BigReal radius = trust_radius(nev).radius;
      for (const BigReal& x : xs) {
        if (abs(x) > radius) {
          throw Error(ErrorCode::WindowUntrusted,
                      "sample " + x.to_string(8) + " lies outside the trust radius " + radius.to_string(8));
        }
      }
      csv << "x,R\n";
      for (const BigReal& x : xs) csv << x.to_string() << "," << nev.eval_R(tau, x).to_string() << "\n";
      r.summary = std::to_string(xs.size()) + " samples of R for tau = " + tau.to_string();
      break;
    }
    case PlotKind::MeasureStaircase: {
      need_inputs(1, 2);
      std::vector<BigReal> nodes, weights;
      if (p.inputs.size() == 1) {
        const SpectrumFile s = read_spectrum_file(p.inputs[0], bits);
        if (!s.normalizing_constants) {
          throw Error(ErrorCode::PreconditionViolated, "spectrum file has no normalizing constants",
                      "normalizing_constants");
        }
        nodes = s.eigenvalues;
        for (const BigReal& a : *s.normalizing_constants) weights.push_back(1L / a);
      } else {
        const SpectrumFile l = read_spectrum_file(p.inputs[0], bits);
        const SpectrumFile u = read_spectrum_file(p.inputs[1], bits);
        const MeasureRecovery mr = recover_measure(l.eigenvalues, u.eigenvalues);
        nodes = mr.measure.nodes;
        weights = mr.measure.weights;
      }
      std::vector<std::size_t> idx(nodes.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return nodes[i] < nodes[j]; });
      csv << "t,weight,cumulative\n";
      BigReal cum(0L, nodes.empty() ? bits : nodes[0].precision());
      for (std::size_t i : idx) {
        cum += weights[i];
        csv << nodes[i].to_string() << "," << weights[i].to_string() << "," << cum.to_string() << "\n";
      }
      r.summary = std::to_string(nodes.size()) + " steps, total mass " + cum.to_string(12);
      break;
    }
    case PlotKind::EigenvalueLadder: {
      need_inputs(2, 2);
      const SpectrumFile l = read_spectrum_file(p.inputs[0], bits);
      const SpectrumFile u = read_spectrum_file(p.inputs[1], bits);
      std::vector<std::pair<BigReal, const char*>> rows;
      for (const BigReal& x : l.eigenvalues) rows.emplace_back(x, "lambda");
      for (const BigReal& x : u.eigenvalues) rows.emplace_back(x, "mu");
      std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      csv << "value,source\n";
      for (const auto& [x, src] : rows) csv << x.to_string() << "," << src << "\n";
      r.summary = std::to_string(rows.size()) + " ladder rows";
      break;
    }
  }
  r.text = csv.str();
  return r;
}

}  // namespace jts
