#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace vchain::cli {

/// Shortest round-trip decimal form of a double (std::to_chars); identical
/// input bits always produce identical text, so outputs diff cleanly.
std::string format_double(double v);

/// Long-format table: one sample per row, single header row.  Undefined
/// cells print empty in CSV and null in JSON.
class Table {
  public:
    explicit Table(std::vector<std::string> columns);

    void add_row(std::vector<std::optional<double>> row);
    size_t rows() const { return rows_.size(); }

    void write_csv(std::ostream& os) const;
    void write_json(std::ostream& os) const;
    void write(std::ostream& os, const std::string& format) const;

  private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::optional<double>>> rows_;
};

/// Flat key = value config file; '#' starts a comment.  Unknown keys are
/// an error so typos cannot silently fall back to defaults.
std::map<std::string, std::string> parse_config_file(const std::string& path);

struct RunConfig {
    double m = 1.0;
    double hbar = 1.0;
    double a = 0.5;
    double adot = 1.0;
    int mu = 1;
    double beta = 0.01;
    double trunc_tol = 1e-16;
    int nx = 200;
    int nt = 40;
    double t_max = -1.0;  // negative: command picks its default
    std::string out;
    std::string format = "csv";
    std::string negative_control;

    void validate() const;
    void apply(const std::map<std::string, std::string>& kv);
};

}  // namespace vchain::cli
