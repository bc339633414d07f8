#include "vchain/cli/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vchain::cli {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void Table::add_row(std::vector<std::optional<double>> row) {
    if (row.size() != columns_.size()) {
        throw std::invalid_argument("Table: row width does not match header");
    }
    rows_.push_back(std::move(row));
}

void Table::write_csv(std::ostream& os) const {
    for (size_t c = 0; c < columns_.size(); ++c) {
        os << (c ? "," : "") << columns_[c];
    }
    os << "\n";
    for (const auto& row : rows_) {
        for (size_t c = 0; c < row.size(); ++c) {
            if (c) os << ",";
            if (row[c] && std::isfinite(*row[c])) os << format_double(*row[c]);
        }
        os << "\n";
    }
}

void Table::write_json(std::ostream& os) const {
    os << "[";
    for (size_t r = 0; r < rows_.size(); ++r) {
        os << (r ? ",\n" : "\n") << "  {";
        for (size_t c = 0; c < columns_.size(); ++c) {
            os << (c ? ", " : "") << "\"" << columns_[c] << "\": ";
            if (rows_[r][c] && std::isfinite(*rows_[r][c])) {
                os << format_double(*rows_[r][c]);
            } else {
                os << "null";
            }
        }
        os << "}";
    }
    os << "\n]\n";
}

void Table::write(std::ostream& os, const std::string& format) const {
    if (format == "csv") {
        write_csv(os);
    } else if (format == "json") {
        write_json(os);
    } else {
        throw std::invalid_argument("Table: format must be csv or json");
    }
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string();
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        };
        if (strip(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("config: line " + std::to_string(lineno) +
                                     " is not 'key = value'");
        }
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw std::runtime_error("config: empty key or value on line " +
                                     std::to_string(lineno));
        }
        kv[key] = value;
    }
    return kv;
}

void RunConfig::validate() const {
    if (!(m > 0.0) || !(hbar > 0.0) || !(a > 0.0) || !(adot > 0.0)) {
        throw std::runtime_error("config: m, hbar, a, adot must be positive");
    }
    if (mu < 1) throw std::runtime_error("config: mu must be a positive integer");
    if (!(beta > 0.0)) throw std::runtime_error("config: beta must be positive");
    if (!(trunc_tol > 0.0 && trunc_tol < 1.0)) {
        throw std::runtime_error("config: trunc_tol must lie in (0, 1)");
    }
    if (nx < 2 || nt < 2) throw std::runtime_error("config: nx and nt must be >= 2");
    if (format != "csv" && format != "json") {
        throw std::runtime_error("config: format must be csv or json");
    }
    if (!negative_control.empty() && negative_control != "flux-parse") {
        throw std::runtime_error("config: unknown negative_control value");
    }
}

void RunConfig::apply(const std::map<std::string, std::string>& kv) {
    const auto as_double = [](const std::string& k, const std::string& v) {
        try {
            size_t pos = 0;
            const double d = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return d;
        } catch (...) {
            throw std::runtime_error("config: bad numeric value for " + k);
        }
    };
    for (const auto& [k, v] : kv) {
        if (k == "m") m = as_double(k, v);
        else if (k == "hbar") hbar = as_double(k, v);
        else if (k == "a") a = as_double(k, v);
        else if (k == "adot") adot = as_double(k, v);
        else if (k == "mu") mu = static_cast<int>(as_double(k, v));
        else if (k == "beta") beta = as_double(k, v);
        else if (k == "trunc_tol") trunc_tol = as_double(k, v);
        else if (k == "nx") nx = static_cast<int>(as_double(k, v));
        else if (k == "nt") nt = static_cast<int>(as_double(k, v));
        else if (k == "t_max") t_max = as_double(k, v);
        else if (k == "out") out = v;
        else if (k == "format") format = v;
        else if (k == "negative_control") negative_control = v;
        else throw std::runtime_error("config: unknown key '" + k + "'");
    }
}

}  // namespace vchain::cli
