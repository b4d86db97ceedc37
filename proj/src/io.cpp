#include "strfm/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "strfm/features.hpp"

namespace strfm {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void ensure_dir(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec)
    throw std::runtime_error("cannot create directory '" + path +
                             "': " + ec.message());
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("short write to '" + path + "'");
}

void write_sweep_csv(const std::string& path, const std::string& axis,
                     const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "axis,value,L2,Linf\n";
  for (const auto& r : rows)
    out << axis << "," << r.value << "," << fmt(r.l2) << "," << fmt(r.linf)
        << "\n";
  write_text(path, out.str());
}

void write_segment_csv(const std::string& path,
                       const std::vector<double>& t_mid,
                       const std::vector<double>& l2) {
  if (t_mid.size() != l2.size())
    throw std::invalid_argument("segment table columns differ in length");
  std::ostringstream out;
  out << "segment,t_mid,L2\n";
  for (std::size_t i = 0; i < l2.size(); ++i)
    out << i << "," << fmt(t_mid[i]) << "," << fmt(l2[i]) << "\n";
  write_text(path, out.str());
}

void write_eigen_csv(const std::string& path,
                     const std::vector<std::complex<double>>& eigenvalues) {
  std::ostringstream out;
  out << "re,im,modulus\n";
  for (const auto& ev : eigenvalues)
    out << fmt(ev.real()) << "," << fmt(ev.imag()) << "," << fmt(std::abs(ev))
        << "\n";
  write_text(path, out.str());
}

void write_numeric_csv(const std::string& path, const std::string& header,
                       const std::vector<std::vector<double>>& rows) {
  std::ostringstream out;
  out << header << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << fmt(row[i]);
    out << "\n";
  }
  write_text(path, out.str());
}

void save_solution(const std::string& path, const std::string& problem_name,
                   const Solution& sol) {
  nlohmann::json j;
  j["format"] = "strfm-solution";
  j["version"] = 1;
  j["problem"] = problem_name;
  j["d_u"] = sol.d_u;
  j["pou_space"] = sol.pou_space == PouKind::A ? "a" : "b";
  j["pou_time"] = sol.pou_time == PouKind::A ? "a" : "b";
  j["decomp"] = {{"dim", sol.decomp.dim},
                 {"lo", std::vector<double>(sol.decomp.lo.data(),
                                            sol.decomp.lo.data() + sol.decomp.dim)},
                 {"hi", std::vector<double>(sol.decomp.hi.data(),
                                            sol.decomp.hi.data() + sol.decomp.dim)},
                 {"n_cells", sol.decomp.n_cells},
                 {"n_time", sol.decomp.n_time},
                 {"t_end", sol.decomp.t_end}};
  j["bank"] = {{"kind", sol.bank.kind == FeatureKind::STC ? "stc" : "sov"},
               {"j_n", sol.bank.j_n},
               {"r_m", sol.bank.r_m},
               {"seed", sol.bank.seed},
               {"share_across_time", sol.bank.share_across_time}};
  j["coefficients"] = std::vector<double>(
      sol.coefficients.data(),
      sol.coefficients.data() + sol.coefficients.size());
  write_text(path, j.dump(1) + "\n");
}

Solution load_solution(const std::string& path,
                       const std::string& expect_problem) {
  const nlohmann::json j = load_json(path);
  if (j.value("format", "") != "strfm-solution" || j.value("version", 0) != 1)
    throw std::runtime_error("'" + path + "' is not a stored solution");
  if (j.at("problem").get<std::string>() != expect_problem)
    throw std::runtime_error("stored solution in '" + path + "' solves '" +
                             j.at("problem").get<std::string>() +
                             "', expected '" + expect_problem + "'");
  Solution sol;
  sol.d_u = j.at("d_u").get<int>();
  sol.pou_space =
      j.at("pou_space").get<std::string>() == "a" ? PouKind::A : PouKind::B;
  sol.pou_time =
      j.at("pou_time").get<std::string>() == "a" ? PouKind::A : PouKind::B;

  const auto& d = j.at("decomp");
  sol.decomp.dim = d.at("dim").get<int>();
  const auto lo = d.at("lo").get<std::vector<double>>();
  const auto hi = d.at("hi").get<std::vector<double>>();
  if ((int)lo.size() != sol.decomp.dim || (int)hi.size() != sol.decomp.dim)
    throw std::runtime_error("stored decomposition bounds are malformed");
  sol.decomp.lo = Eigen::Map<const Vec>(lo.data(), (long long)lo.size());
  sol.decomp.hi = Eigen::Map<const Vec>(hi.data(), (long long)hi.size());
  sol.decomp.n_cells = d.at("n_cells").get<std::vector<int>>();
  sol.decomp.n_time = d.at("n_time").get<int>();
  sol.decomp.t_end = d.at("t_end").get<double>();

  const auto& b = j.at("bank");
  const FeatureKind kind = b.at("kind").get<std::string>() == "sov"
                               ? FeatureKind::SoV
                               : FeatureKind::STC;
  sol.bank = draw_bank(kind, sol.decomp, b.at("j_n").get<int>(),
                       b.at("seed").get<std::uint64_t>(),
                       b.at("r_m").get<double>(),
                       b.at("share_across_time").get<bool>());

  const auto coeff = j.at("coefficients").get<std::vector<double>>();
  sol.coefficients =
      Eigen::Map<const Eigen::VectorXd>(coeff.data(), (long long)coeff.size());
  const long long want = (long long)sol.decomp.cell_count() *
                         sol.decomp.n_time * sol.bank.j_n * sol.d_u;
  if (sol.coefficients.size() != want)
    throw std::runtime_error("stored coefficient count does not match shape");
  return sol;
}

nlohmann::json report_json(const SolveReport& rep) {
  return {{"columns", rep.coefficients.size()},
          {"numerical_rank", rep.numerical_rank},
          {"residual_2norm", rep.residual_2norm},
          {"sigma_max", rep.sigma_max},
          {"sigma_min_kept", rep.sigma_min_kept},
          {"truncation_tol", rep.truncation_tol},
          {"wall_time", rep.wall_time}};
}

nlohmann::json report_json(const ErrorReport& rep) {
  return {{"L2_global", rep.l2},
          {"L2_rel", rep.l2_rel},
          {"Linf_global", rep.linf},
          {"component_Linf", rep.component_linf},
          {"segment_L2", rep.segment_l2},
          {"segment_L2_rel", rep.segment_l2_rel},
          {"segment_t_mid", rep.segment_t_mid},
          {"grid_x", rep.grid_x},
          {"grid_t", rep.grid_t}};
}

nlohmann::json report_json(const EigenReport& rep) {
  return {{"count", rep.eigenvalues.size()},
          {"unique_count", rep.unique_count},
          {"lambda_m", rep.lambda_m},
          {"growth_factor", rep.growth_factor}};
}

nlohmann::json report_json(const GrowthFit& fit) {
  return {{"rate", fit.rate}, {"r_squared", fit.r_squared}};
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return nlohmann::json::parse(in);
}

namespace {

bool type_matches(const nlohmann::json& v, const std::string& t) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "number") return v.is_number();
  if (t == "integer") return v.is_number_integer();
  if (t == "boolean") return v.is_boolean();
  if (t == "null") return v.is_null();
  return false;
}

std::string validate_at(const nlohmann::json& doc, const nlohmann::json& schema,
                        const std::string& path) {
  if (schema.contains("type")) {
    const auto& t = schema.at("type");
    bool ok = false;
    if (t.is_string()) ok = type_matches(doc, t.get<std::string>());
    else
      for (const auto& alt : t)
        ok = ok || type_matches(doc, alt.get<std::string>());
    if (!ok) return path + ": wrong type, expected " + t.dump();
  }
  if (schema.contains("enum")) {
    bool ok = false;
    for (const auto& alt : schema.at("enum")) ok = ok || alt == doc;
    if (!ok) return path + ": value not in enum " + schema.at("enum").dump();
  }
  if (doc.is_object()) {
    if (schema.contains("required"))
      for (const auto& key : schema.at("required"))
        if (!doc.contains(key.get<std::string>()))
          return path + ": missing required member '" +
                 key.get<std::string>() + "'";
    const bool closed = schema.contains("additionalProperties") &&
                        schema.at("additionalProperties").is_boolean() &&
                        !schema.at("additionalProperties").get<bool>();
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      const bool known =
          schema.contains("properties") && schema.at("properties").contains(it.key());
      if (known) {
        const std::string err = validate_at(
            it.value(), schema.at("properties").at(it.key()), path + "/" + it.key());
        if (!err.empty()) return err;
      } else if (closed) {
        return path + ": unexpected member '" + it.key() + "'";
      }
    }
  }
  if (doc.is_array() && schema.contains("items")) {
    for (std::size_t i = 0; i < doc.size(); ++i) {
      const std::string err = validate_at(doc[i], schema.at("items"),
                                          path + "/" + std::to_string(i));
      if (!err.empty()) return err;
    }
  }
  return "";
}

}  // namespace

std::string schema_validate(const nlohmann::json& doc,
                            const nlohmann::json& schema) {
  return validate_at(doc, schema, "");
}

}  // namespace strfm
