#include "skl/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace skl {

namespace {

struct Ctx {
    const std::function<double(double)>& f;
    long evals = 0;
    long intervals = 0;
    long max_intervals;
    bool budget_ok = true;

    double eval(double x) {
        ++evals;
        return f(x);
    }
};

double simpson(double h, double fa, double fm, double fb) {
    return (fa + 4.0 * fm + fb) * (h / 6.0);
}

double recurse(Ctx& ctx, double a, double b, double fa, double fm, double fb, double whole,
               double tol, int depth, double& err_acc) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = ctx.eval(lm);
    const double frm = ctx.eval(rm);
    const double left = simpson(m - a, fa, flm, fm);
    const double right = simpson(b - m, fm, frm, fb);
    const double delta = left + right - whole;
    ++ctx.intervals;
    if (ctx.intervals > ctx.max_intervals) ctx.budget_ok = false;
    if (std::fabs(delta) <= 15.0 * tol || depth <= 0 || !ctx.budget_ok) {
        err_acc += std::fabs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    return recurse(ctx, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, err_acc) +
           recurse(ctx, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, err_acc);
}

}  // namespace

QuadResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                            double abs_tol, int max_depth, long max_intervals) {
    if (!(b >= a)) throw std::invalid_argument("adaptive_simpson: b < a");
    QuadResult out;
    if (a == b) return out;
    Ctx ctx{f, 0, 0, max_intervals, true};
    const double fa = ctx.eval(a);
    const double m = 0.5 * (a + b);
    const double fm = ctx.eval(m);
    const double fb = ctx.eval(b);
    const double whole = simpson(b - a, fa, fm, fb);
    double err = 0.0;
    out.value = recurse(ctx, a, b, fa, fm, fb, whole, abs_tol, max_depth, err);
    out.error_estimate = err;
    out.evaluations = ctx.evals;
    out.converged = ctx.budget_ok;
    return out;
}

}  // namespace skl
