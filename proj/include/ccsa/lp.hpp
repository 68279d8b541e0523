#pragma once

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ccsa/errors.hpp"

namespace ccsa::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Relation { LessEq, Eq, GreaterEq };

enum class LPStatus { Optimal, Infeasible, Unbounded };

/**
 * @brief Linear program in minimization form.
 *
 * Variables carry individual bounds (default [0, +inf)); constraints are
 * sparse rows with a relation and right-hand side.
 */
struct LPModel {
    struct Row {
        std::vector<std::pair<int, double>> coeffs;
        Relation rel = Relation::LessEq;
        double rhs = 0.0;
    };

    std::vector<double> objective;
    double objective_offset = 0.0;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<Row> rows;

    int num_vars() const { return static_cast<int>(objective.size()); }
    int num_rows() const { return static_cast<int>(rows.size()); }

    int add_variable(double obj = 0.0, double lo = 0.0, double hi = kInf) {
        objective.push_back(obj);
        lower.push_back(lo);
        upper.push_back(hi);
        return num_vars() - 1;
    }

    void add_constraint(std::vector<std::pair<int, double>> coeffs, Relation rel, double rhs) {
        rows.push_back(Row{std::move(coeffs), rel, rhs});
    }

    std::size_t num_nonzeros() const {
        std::size_t nnz = 0;
        for (const auto& r : rows) nnz += r.coeffs.size();
        return nnz;
    }

    /// Throws invalid_argument on out-of-range indices, NaNs, or empty bounds.
    void validate() const {
        const int n = num_vars();
        if (lower.size() != objective.size() || upper.size() != objective.size())
            throw invalid_argument("LPModel: bound arrays do not match variable count");
        for (int j = 0; j < n; ++j) {
            if (std::isnan(objective[j])) throw invalid_argument("LPModel: NaN objective coefficient");
            if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] > upper[j])
                throw invalid_argument("LPModel: bad bounds on variable " + std::to_string(j));
        }
        std::vector<char> seen(n, 0);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& r = rows[i];
            if (!std::isfinite(r.rhs))
                throw invalid_argument("LPModel: row " + std::to_string(i) + " has non-finite rhs");
            for (const auto& [j, a] : r.coeffs) {
                if (j < 0 || j >= n)
                    throw invalid_argument("LPModel: row " + std::to_string(i) +
                                           " references undeclared variable " + std::to_string(j));
                if (!std::isfinite(a))
                    throw invalid_argument("LPModel: row " + std::to_string(i) +
                                           " has a non-finite coefficient");
                if (seen[j])
                    throw invalid_argument("LPModel: row " + std::to_string(i) +
                                           " repeats variable " + std::to_string(j));
                seen[j] = 1;
            }
            for (const auto& [j, a] : r.coeffs) seen[j] = 0;
        }
    }

    /// Human-readable dump in the fixed-form interchange style; debug only.
    std::string dump() const {
        std::ostringstream os;
        os << "MINIMIZE\n ";
        if (objective_offset != 0.0) os << " " << objective_offset << " +";
        for (int j = 0; j < num_vars(); ++j)
            if (objective[j] != 0.0)
                os << " " << (objective[j] >= 0 ? "+" : "") << objective[j] << " x" << j;
        os << "\nSUBJECT TO\n";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            os << " r" << i << ":";
            for (const auto& [j, a] : rows[i].coeffs)
                os << " " << (a >= 0 ? "+" : "") << a << " x" << j;
            os << (rows[i].rel == Relation::LessEq ? " <= "
                   : rows[i].rel == Relation::Eq   ? " = "
                                                   : " >= ")
               << rows[i].rhs << "\n";
        }
        os << "BOUNDS\n";
        for (int j = 0; j < num_vars(); ++j)
            os << " " << lower[j] << " <= x" << j << " <= " << upper[j] << "\n";
        return os.str();
    }
};

struct LPSolution {
    LPStatus status = LPStatus::Optimal;
    double objective = 0.0;
    std::vector<double> values;
    long long iterations = 0;
};

} // namespace ccsa::lp
