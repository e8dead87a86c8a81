#include "stablefit/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

namespace stablefit {

namespace {

using Json = nlohmann::ordered_json;

// Column-aligned table: first column left aligned, the rest right aligned.
class TextTable {
 public:
  explicit TextTable(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  std::string str() const {
    std::vector<std::size_t> width;
    for (const auto& r : rows_) {
      if (width.size() < r.size()) width.resize(r.size(), 0);
      for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    }
    std::ostringstream os;
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const auto& r = rows_[k];
      std::string line;
      for (std::size_t i = 0; i < r.size(); ++i) {
        const std::string pad(width[i] - r[i].size(), ' ');
        if (i == 0) {
          line += r[i] + pad;
        } else {
          line += "  " + pad + r[i];
        }
      }
      line.erase(line.find_last_not_of(' ') + 1);
      os << line << '\n';
      if (k == 0) {
        std::size_t total = 0;
        for (std::size_t i = 0; i < width.size(); ++i) total += width[i] + (i == 0 ? 0 : 2);
        os << std::string(total, '-') << '\n';
      }
    }
    return os.str();
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

std::string title(const std::string& what, const ReturnSeries& s) {
  std::string t = what + ": " + (s.asset_id.empty() ? "returns" : s.asset_id);
  if (!s.first_date.empty()) t += " (" + s.first_date + " to " + s.last_date + ")";
  return t + "\n\n";
}

std::string row_label(FitMethod m) {
  switch (m) {
    case FitMethod::mle:
      return "ML";
    case FitMethod::quantile:
      return "Quantile";
    case FitMethod::ecf:
      return "Sample characteristic";
  }
  return "?";
}

std::string column_label(Candidate c) {
  switch (c) {
    case Candidate::stable:
      return "Stable";
    case Candidate::cauchy:
      return "Cauchy";
    case Candidate::student_t:
      return "Student-t";
    case Candidate::levy:
      return "Levy";
  }
  return "?";
}

Json params_json(const StableParams& p) {
  return Json{{"alpha", p.alpha}, {"beta", p.beta}, {"gamma", p.gamma}, {"delta", p.delta},
              {"parameterization", p.kind == Parameterization::S1 ? "S1" : "S0"}};
}

}  // namespace

std::string format_sig4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string render_summary_table(const ReturnSeries& series, const SummaryStats& st) {
  TextTable t({"Asset", "Mean", "Std.dev", "Skewness", "Kurtosis", "Min", "Max", "J-B test", "Obs"});
  t.add({series.asset_id.empty() ? "returns" : series.asset_id, format_sig4(st.mean), format_sig4(st.std_dev),
         format_sig4(st.skewness), format_sig4(st.kurtosis), format_sig4(st.min), format_sig4(st.max),
         format_sig4(st.jarque_bera), std::to_string(st.n_obs)});
  return title("Summary statistics", series) + t.str();
}

std::string render_fit_table(const ReturnSeries& series, const std::vector<FitRow>& rows) {
  TextTable t({"Estimator", "alpha", "beta", "gamma", "delta"});
  std::vector<std::string> notes;
  for (const auto& r : rows) {
    if (!r.fit) {
      t.add({row_label(r.method), "error", "", "", ""});
      notes.push_back(row_label(r.method) + ": " + r.error);
      continue;
    }
    const auto& f = *r.fit;
    const auto& p = f.params;
    if (f.std_errors) {
      const auto& e = *f.std_errors;
      t.add({row_label(r.method), format_sig4(p.alpha) + " +/- " + format_sig4(e.alpha),
             format_sig4(p.beta) + " +/- " + format_sig4(e.beta), format_sig4(p.gamma) + " +/- " + format_sig4(e.gamma),
             format_sig4(p.delta) + " +/- " + format_sig4(e.delta)});
    } else {
      t.add({row_label(r.method), format_sig4(p.alpha), format_sig4(p.beta), format_sig4(p.gamma),
             format_sig4(p.delta)});
    }
    if (!f.converged) notes.push_back(row_label(r.method) + ": optimizer did not report convergence");
    if (f.table_clamped) notes.push_back(row_label(r.method) + ": sample quantiles outside the McCulloch tables, clamped");
    if (f.box_clamped) notes.push_back(row_label(r.method) + ": regression left the parameter box, clamped");
    for (const auto& n : f.notes) notes.push_back(row_label(r.method) + ": " + n);
  }
  std::string out = title("Stable estimates (S1)", series) + t.str();
  if (!notes.empty()) {
    out += '\n';
    for (const auto& n : notes) out += "note: " + n + '\n';
  }
  return out;
}

std::string render_gof_table(const ReturnSeries& series, const GofReport& report) {
  std::vector<std::string> header{"Sig. level"};
  for (Candidate c : kCandidates) header.push_back(column_label(c));
  TextTable t(header);
  static const char* level_names[] = {"20%", "10%", "5%", "1%"};
  for (std::size_t l = 0; l < kSignificanceLevels.size(); ++l) {
    std::vector<std::string> row{level_names[l]};
    for (Candidate c : kCandidates) {
      const bool ok = report.result(c).not_rejected[l];
      row.push_back(format_sig4(report.critical.values[l]) + (ok ? "*" : " "));
    }
    t.add(row);
  }
  std::vector<std::string> stat{"test stat"}, pval{"p-value"};
  for (Candidate c : kCandidates) {
    stat.push_back(format_sig4(report.result(c).ks.statistic) + " ");
    pval.push_back(format_sig4(report.result(c).ks.p_value) + " ");
  }
  t.add(stat);
  t.add(pval);
  std::string out = title("Kolmogorov-Smirnov tests", series) + t.str();
  out += "\n* test statistic below the critical value: not rejected at that level\n";
  if (report.critical.small_sample_warning) out += "warning: n < 35, asymptotic critical values are unreliable\n";
  const auto& s = report.stable;
  const auto& tf = report.student_t;
  out += "\nStable:    alpha " + format_sig4(s.alpha) + ", beta " + format_sig4(s.beta) + ", gamma " +
         format_sig4(s.gamma) + ", delta " + format_sig4(s.delta) + '\n';
  out += "Cauchy:    gamma " + format_sig4(report.cauchy.params.gamma) + ", delta " +
         format_sig4(report.cauchy.params.delta) + '\n';
  out += "Student-t: dof " + format_sig4(tf.dof) + ", location " + format_sig4(tf.location) + ", scale " +
         format_sig4(tf.scale) + '\n';
  out += "Levy:      gamma " + format_sig4(report.levy.params.gamma) + ", delta " +
         format_sig4(report.levy.params.delta) + '\n';
  return out;
}

std::string summary_json(const ReturnSeries& series, const SummaryStats& st) {
  Json j{{"asset", series.asset_id},      {"first_date", series.first_date}, {"last_date", series.last_date},
         {"n_obs", st.n_obs},             {"mean", st.mean},                 {"std_dev", st.std_dev},
         {"skewness", st.skewness},       {"kurtosis", st.kurtosis},         {"min", st.min},
         {"max", st.max},                 {"jarque_bera", st.jarque_bera}};
  return j.dump(2) + '\n';
}

std::string fit_json(const ReturnSeries& series, const std::vector<FitRow>& rows) {
  Json fits = Json::array();
  for (const auto& r : rows) {
    Json f{{"method", std::string(method_name(r.method))}, {"ok", r.fit.has_value()}};
    if (!r.fit) {
      f["error"] = r.error;
      fits.push_back(f);
      continue;
    }
    const auto& fit = *r.fit;
    const Json params = params_json(fit.params);
    for (auto& [k, v] : params.items()) f[k] = v;
    if (fit.std_errors) {
      const auto& e = *fit.std_errors;
      f["std_errors"] = Json{{"alpha", e.alpha}, {"beta", e.beta}, {"gamma", e.gamma}, {"delta", e.delta}};
    } else {
      f["std_errors"] = nullptr;
    }
    f["log_likelihood"] = fit.log_likelihood ? Json(*fit.log_likelihood) : Json(nullptr);
    f["converged"] = fit.converged;
    f["table_clamped"] = fit.table_clamped;
    f["box_clamped"] = fit.box_clamped;
    f["notes"] = fit.notes;
    fits.push_back(f);
  }
  Json j{{"asset", series.asset_id}, {"n_obs", series.returns.size()}, {"fits", fits}};
  return j.dump(2) + '\n';
}

std::string gof_json(const ReturnSeries& series, const GofReport& report) {
  Json candidates = Json::array();
  for (Candidate c : kCandidates) {
    const auto& r = report.result(c);
    candidates.push_back(Json{{"name", std::string(candidate_name(c))},
                              {"statistic", r.ks.statistic},
                              {"p_value", r.ks.p_value},
                              {"n_obs", r.ks.n_obs},
                              {"not_rejected", r.not_rejected}});
  }
  Json cauchy = params_json(report.cauchy.params);
  cauchy["log_likelihood"] = report.cauchy.log_likelihood;
  Json levy = params_json(report.levy.params);
  levy["log_likelihood"] = report.levy.log_likelihood;
  const auto& t = report.student_t;
  Json j{{"asset", series.asset_id},
         {"n_obs", report.n_obs},
         {"levels", kSignificanceLevels},
         {"critical_values", report.critical.values},
         {"small_sample_warning", report.critical.small_sample_warning},
         {"candidates", candidates},
         {"parameters",
          Json{{"stable", params_json(report.stable)},
               {"cauchy", cauchy},
               {"student_t",
                Json{{"dof", t.dof},
                     {"location", t.location},
                     {"scale", t.scale},
                     {"log_likelihood", t.log_likelihood},
                     {"converged", t.converged}}},
               {"levy", levy}}}};
  return j.dump(2) + '\n';
}

}  // namespace stablefit
