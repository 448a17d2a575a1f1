#include "solitonlab/singular_launch.hpp"

#include "solitonlab/series.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace solitonlab {

namespace {

struct SeriesProblem {
    const ProblemSpec& spec;
    std::vector<int> dims;
    int prec;
    std::vector<std::vector<double>> a;
    std::vector<double> c;

    // coefficients of t^{n-2} in f''_i/f_i - (L_i' + L_i^2) and u'' - udd
    Eigen::VectorXd residual(int n) const {
        const std::size_t k = dims.size();
        std::vector<Series> f(k), df(k), ddf(k);
        for (std::size_t i = 0; i < k; ++i) {
            f[i] = Series::polynomial(a[i], prec);
            df[i] = f[i].derivative();
            ddf[i] = df[i].derivative();
        }
        const Series u = Series::polynomial(c, prec);
        const Series du = u.derivative();
        const Series ddu = du.derivative();
        const auto rates = soliton_rates<Series>(spec.ansatz, spec.epsilon, f, df, du);
        Eigen::VectorXd r(long(k) + 1);
        for (std::size_t i = 0; i < k; ++i) {
            const Series L = df[i] / f[i];
            r(long(i)) = (ddf[i] / f[i] - (rates.dlog[i] + L * L)).coefficient(n - 2);
        }
        r(long(k)) = (ddu - rates.udd).coefficient(n - 2);
        return r;
    }

    double& unknown(int n, std::size_t j) {
        if (j == dims.size()) return c[std::size_t(n)];
        return j == 0 ? a[0][std::size_t(n) + 1] : a[j][std::size_t(n)];
    }
};

void check_launch_inputs(const ProblemSpec& spec, double delta, int order) {
    spec.validate();
    if (!(delta > 0.0) || !std::isfinite(delta)) throw std::invalid_argument("launch_delta must be positive");
    if (order < 2 || order % 2 != 0) throw std::invalid_argument("launch order must be even and >= 2");
    if (const auto* ts = std::get_if<TwoSummandsAnsatz>(&spec.ansatz)) {
        if (!ts->geometric_relation_holds())
            throw std::invalid_argument("two_summands: smooth collapse of the fibre needs A1 = d1 (d1 - 1)");
    }
}

}  // namespace

LaunchSeries launch_series(const ProblemSpec& spec, int order) {
    check_launch_inputs(spec, 1.0, order);
    const auto dims = component_dims(spec.ansatz);
    const std::size_t k = dims.size();
    SeriesProblem prob{spec, dims, order + 8, {}, {}};
    prob.a.assign(k, std::vector<double>(std::size_t(order) + 2, 0.0));
    prob.c.assign(std::size_t(order) + 1, 0.0);
    prob.a[0][1] = 1.0;
    for (std::size_t i = 1; i < k; ++i) prob.a[i][0] = spec.initial[i - 1];

    const int d_s = dims[0];
    for (int n = 2; n <= order; n += 2) {
        std::size_t nunk = k + 1;
        if (n == 2) {
            // C is free: u''(0) = C / (d_S + 1) closes the otherwise degenerate system
            prob.c[2] = spec.C / (2.0 * (d_s + 1));
            nunk = k;
        }
        for (std::size_t j = 0; j < nunk; ++j) prob.unknown(n, j) = 0.0;
        const Eigen::VectorXd r0 = prob.residual(n);
        Eigen::MatrixXd J(long(k) + 1, long(nunk));
        for (std::size_t j = 0; j < nunk; ++j) {
            prob.unknown(n, j) = 1.0;
            J.col(long(j)) = prob.residual(n) - r0;
            prob.unknown(n, j) = 0.0;
        }
        const Eigen::VectorXd z = J.completeOrthogonalDecomposition().solve(-r0);
        for (std::size_t j = 0; j < nunk; ++j) prob.unknown(n, j) = z(long(j));
    }

    LaunchSeries out;
    out.f = prob.a;
    out.u = prob.c;
    out.order = order;
    for (int n = 2; n <= order; n += 2) {
        const Eigen::VectorXd r = prob.residual(n);
        out.max_residual = std::max(out.max_residual, r.cwiseAbs().maxCoeff());
    }
    return out;
}

SolitonState evaluate_series(const LaunchSeries& series, double t) {
    auto horner = [t](const std::vector<double>& c, double& value, double& deriv) {
        value = 0.0;
        deriv = 0.0;
        for (std::size_t k = c.size(); k-- > 0;) {
            deriv = deriv * t + value;
            value = value * t + c[k];
        }
    };
    SolitonState s;
    s.t = t;
    const std::size_t k = series.f.size();
    s.f.resize(k);
    s.df.resize(k);
    for (std::size_t i = 0; i < k; ++i) horner(series.f[i], s.f[i], s.df[i]);
    horner(series.u, s.u, s.du);
    return s;
}

double default_launch_delta(const ProblemSpec& spec) {
    double m = 1.0;
    for (double g : spec.initial) m = std::min(m, g);
    return 1e-2 * m;
}

SolitonState launch(const ProblemSpec& spec, const LaunchOptions& opts) {
    const double delta = opts.delta > 0.0 ? opts.delta : default_launch_delta(spec);
    check_launch_inputs(spec, delta, opts.order);
    return evaluate_series(launch_series(spec, opts.order), delta);
}

SolitonState launch_two_summands(const ProblemSpec& spec, double delta, int order) {
    if (spec.kind() != SystemKind::TwoSummands) throw std::invalid_argument("launch_two_summands: wrong system");
    check_launch_inputs(spec, delta, order);
    return launch(spec, {delta, order});
}

SolitonState launch_dancer_wang(const ProblemSpec& spec, double delta, int order) {
    if (spec.kind() != SystemKind::DancerWang) throw std::invalid_argument("launch_dancer_wang: wrong system");
    check_launch_inputs(spec, delta, order);
    return launch(spec, {delta, order});
}

SolitonState launch_lpp(const ProblemSpec& spec, double delta, int order) {
    if (spec.kind() != SystemKind::LuPagePope) throw std::invalid_argument("launch_lpp: wrong system");
    check_launch_inputs(spec, delta, order);
    return launch(spec, {delta, order});
}

}  // namespace solitonlab
