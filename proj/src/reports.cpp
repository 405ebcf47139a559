#include "mlyap/reports.hpp"

#include <cmath>

namespace mlyap {

CsvTable lambda_mc_table(const std::vector<McLambdaEstimate>& estimates) {
    CsvTable t({"p", "t", "lambda_t", "se", "dlambda_t", "d2lambda_t", "ess", "n_blowups"});
    for (const auto& e : estimates)
        t.begin_row()
            .cell(e.p)
            .cell(e.t)
            .cell(e.lambda_t)
            .cell(e.se_lambda)
            .cell(e.dlambda_t)
            .cell(e.d2lambda_t)
            .cell(e.ess)
            .cell(static_cast<long>(e.n_blowups));
    return t;
}

CsvTable spectral_table(const std::vector<SpectralResult>& results) {
    CsvTable t({"p", "lambda", "residual", "gap_estimate", "n", "x_max", "weight_params"});
    for (const auto& r : results)
        t.begin_row()
            .cell(r.p)
            .cell(r.lambda)
            .cell(r.residual)
            .cell(r.gap_estimate)
            .cell(static_cast<long>(r.grid.n))
            .cell(r.grid.x_max)
            .cell(r.weight.describe());
    return t;
}

CsvTable eigenfunction_table(const SpectralResult& result) {
    CsvTable t({"x", "h", "V", "phi"});
    const Vector x = result.grid.nodes();
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double v = result.weight.v(x[i]);
        t.begin_row().cell(x[i]).cell(result.eigvec[i]).cell(v).cell(result.eigvec[i] * v);
    }
    return t;
}

CsvTable bounds_table(const std::vector<BoundsReport>& rows,
                      const std::vector<double>& spectral_lambda,
                      const std::vector<GrowthReport>& growth) {
    CsvTable t({"p", "gamma_sup", "tail_verdict", "upper", "lower", "spectral_lambda"});
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        t.begin_row().cell(r.p);
        if (i < growth.size()) {
            t.cell(growth[i].gamma_sup).cell(std::string(growth[i].cond1_ok ? "pass" : "fail"));
        } else {
            t.cell(std::string("n/a")).cell(std::string("n/a"));
        }
        t.cell(r.has_upper ? format_double(r.upper.gamma_star) : "n/a");
        t.cell(r.has_lower ? format_double(r.lower.gamma_tilde) : "n/a");
        t.cell(i < spectral_lambda.size() ? format_double(spectral_lambda[i]) : "n/a");
    }
    return t;
}

CsvTable growth_table(const std::vector<GrowthReport>& rows) {
    CsvTable t({"p", "weight", "gamma_sup", "tail_trend", "cond0", "cond0_sup", "cond1", "cond2",
                "cond2_beta", "cond2_sup", "cond3", "cond3_beta", "cond3_sup"});
    auto verdict = [](bool ok) { return std::string(ok ? "pass" : "fail"); };
    for (const auto& r : rows)
        t.begin_row()
            .cell(r.p)
            .cell(r.weight.describe())
            .cell(r.gamma_sup)
            .cell(r.tail_trend)
            .cell(verdict(r.cond0_ok))
            .cell(r.cond0_sup)
            .cell(verdict(r.cond1_ok))
            .cell(verdict(r.cond2_ok))
            .cell(r.cond2_beta)
            .cell(r.cond2_sup)
            .cell(verdict(r.cond3_ok))
            .cell(r.cond3_beta)
            .cell(r.cond3_sup);
    return t;
}

CsvTable rate_function_table(const RateFunctionTable& table) {
    CsvTable t({"s", "I", "argmax_p", "boundary_limited"});
    for (Eigen::Index i = 0; i < table.s.size(); ++i)
        t.begin_row()
            .cell(table.s[i])
            .cell(table.rate[i])
            .cell(table.argmax_p[i])
            .cell(static_cast<long>(table.boundary_limited[i]));
    return t;
}

CsvTable asymptotics_table(const AsymptoticReport& report) {
    CsvTable t({"p", "upper", "lower", "upper_scaled", "lower_scaled", "exponent",
                "paper_constant_lo", "paper_constant_hi"});
    for (const auto& row : report.ladder) {
        const double scale = std::pow(row.p, report.exponent);
        t.begin_row()
            .cell(row.p)
            .cell(row.upper)
            .cell(row.lower)
            .cell(row.upper / scale)
            .cell(row.lower / scale)
            .cell(report.exponent)
            .cell(report.paper_constant_lo)
            .cell(report.paper_constant_hi);
    }
    return t;
}

}  // namespace mlyap
