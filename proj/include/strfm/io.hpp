#pragma once

#include <complex>
#include <string>
#include <vector>

#include <json.hpp>

#include "strfm/analysis.hpp"
#include "strfm/solve.hpp"

namespace strfm {

// All writers format floating-point values with %.17g, so identical inputs
// produce identical bytes (the determinism contract of the run artifacts).

void ensure_dir(const std::string& path);
void write_text(const std::string& path, const std::string& content);

// schema: axis,value,L2,Linf
void write_sweep_csv(const std::string& path, const std::string& axis,
                     const std::vector<SweepRow>& rows);
// schema: segment,t_mid,L2
void write_segment_csv(const std::string& path,
                       const std::vector<double>& t_mid,
                       const std::vector<double>& l2);
// schema: re,im,modulus
void write_eigen_csv(const std::string& path,
                     const std::vector<std::complex<double>>& eigenvalues);
// free-form numeric table (solution snapshots)
void write_numeric_csv(const std::string& path, const std::string& header,
                       const std::vector<std::vector<double>>& rows);

// A stored field: solver/bank parameters plus coefficients.  Banks are
// reproducible from their parameters, so the weights themselves are not
// stored.  Loading rejects a file written for a different problem.
void save_solution(const std::string& path, const std::string& problem_name,
                   const Solution& sol);
Solution load_solution(const std::string& path,
                       const std::string& expect_problem);

nlohmann::json report_json(const SolveReport& rep);
nlohmann::json report_json(const ErrorReport& rep);
nlohmann::json report_json(const EigenReport& rep);
nlohmann::json report_json(const GrowthFit& fit);

nlohmann::json load_json(const std::string& path);

// Structural validation against the subset of JSON Schema used by the
// shipped summary schema: type, required, properties, items, enum,
// additionalProperties.  Returns "" when valid, else a message naming the
// offending path.
std::string schema_validate(const nlohmann::json& doc,
                            const nlohmann::json& schema);

}  // namespace strfm
