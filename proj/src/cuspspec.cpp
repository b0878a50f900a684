#include "rankone/cuspspec.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rankone {

namespace {

constexpr double kTwoPi2 = 4.0 * std::numbers::pi * std::numbers::pi;

void enumerate_modes(int d, int xi_max, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == d) {
        long s = 0;
        for (int v : cur) s += static_cast<long>(v) * v;
        if (s <= static_cast<long>(xi_max) * xi_max) out.push_back(cur);
        return;
    }
    for (int v = -xi_max; v <= xi_max; ++v) {
        cur.push_back(v);
        enumerate_modes(d, xi_max, cur, out);
        cur.pop_back();
    }
}

}  // namespace

int CylinderGrid::mode_index(const std::vector<int>& xi) const {
    auto it = std::lower_bound(modes.begin(), modes.end(), xi);
    if (it == modes.end() || *it != xi) return -1;
    return static_cast<int>(it - modes.begin());
}

int torus_dimension(Family f, int r) {
    switch (f) {
        case Family::O: return r - 1;
        case Family::U: return 2 * (r - 1) + 1;
        case Family::Sp: return 4 * (r - 1) + 3;
        default: throw UnsupportedFamily("cylinder model needs a concrete family");
    }
}

int default_measure_exponent(Family f, int r) {
    switch (f) {
        case Family::O: return r;
        case Family::U: return 2 * r + 1;
        case Family::Sp: return 4 * r + 3;
        default: throw UnsupportedFamily("cylinder model needs a concrete family");
    }
}

CylinderGrid build_grid(const GridParams& p) {
    if (p.n_y < 16) throw BadDomain("n_y must be at least 16");
    if (!(p.y_lo > 0 && p.y_lo < p.a && p.a < p.y_hi)) throw BadDomain("need 0 < y_lo < a < y_hi");
    if (p.xi_max < 0) throw BadDomain("xi_max must be nonnegative");
    if (p.r < 2) throw BadDomain("r must be at least 2");
    CylinderGrid g;
    g.params = p;
    g.d = torus_dimension(p.family, p.r);
    g.m = p.measure_exponent.value_or(default_measure_exponent(p.family, p.r));
    const double t0 = std::log(p.y_lo), ta = std::log(p.a), t1 = std::log(p.y_hi);
    const int cells = p.n_y - 1;
    int below = static_cast<int>(std::lround(cells * (ta - t0) / (t1 - t0)));
    below = std::clamp(below, 1, cells - 1);
    const double h1 = (ta - t0) / below, h2 = (t1 - ta) / (cells - below);
    for (int k = 0; k < p.n_y; ++k) {
        double t = k <= below ? t0 + k * h1 : ta + (k - below) * h2;
        if (k == below) t = ta;
        if (k + 1 == p.n_y) t = t1;
        g.tau.push_back(t);
        g.y.push_back(k == below ? p.a : std::exp(t));
    }
    g.y.front() = p.y_lo;
    g.y.back() = p.y_hi;
    for (int k = 0; k < cells; ++k) g.hc.push_back(g.tau[static_cast<std::size_t>(k + 1)] - g.tau[static_cast<std::size_t>(k)]);
    g.h = *std::max_element(g.hc.begin(), g.hc.end());
    std::vector<int> cur;
    enumerate_modes(g.d, p.xi_max, cur, g.modes);
    std::sort(g.modes.begin(), g.modes.end());
    g.zero_mode = g.mode_index(std::vector<int>(static_cast<std::size_t>(g.d), 0));
    return g;
}

StandardLaplacian standard_laplacian(Family family, int r) {
    FormSpec spec = make_form(family, r);
    Derivation der = derive_laplacian(spec);
    StandardLaplacian out;
    if (family == Family::O) {
        out.renorm.scalar = Rational(2);
        for (const auto& c : der.frame.coordinates)
            if (c != "y") out.renorm.lambda2[c] = Rational(2);
        out.renorm.note = "factor 2 dropped; x -> sqrt(2) x";
    } else {
        out.renorm = *reference_formula(spec, true).renorm;
    }
    out.op = renormalize(der.op, out.renorm);
    for (const auto& c : der.frame.coordinates)
        if (c != "y") out.directions.push_back(c);
    return out;
}

int DiscreteOperator::dof_count() const {
    int n = 0;
    for (const auto& a : active) n += static_cast<int>(std::count(a.begin(), a.end(), 1));
    return n;
}

namespace {

// Reads kappa y^p from a coefficient that must be a monomial in y.
std::pair<double, int> y_monomial(const Laurent& c, const std::string& what) {
    if (c.terms().size() != 1) throw MissingDiffOp(what + " is not a monomial in y");
    const auto& [mono, s] = *c.terms().begin();
    if (!s.is_real()) throw MissingDiffOp(what + " has a non-real coefficient");
    int p = 0;
    for (const auto& [v, e] : mono) {
        if (v != "y") throw MissingDiffOp(what + " depends on " + v);
        p = e;
    }
    return {s.re().to_double(), p};
}

}  // namespace

DiscreteOperator assemble(const DiffOp& op, const CylinderGrid& grid) {
    DiscreteOperator D;
    D.grid = grid;
    const int m = grid.m;
    auto yy = op.terms.find(MultiIndex{{"y", 2}});
    auto y1 = op.terms.find(MultiIndex{{"y", 1}});
    if (yy == op.terms.end()) throw MissingDiffOp("operator has no d_y^2 term");
    auto [k2, p2] = y_monomial(yy->second, "d_y^2 coefficient");
    if (k2 != 1.0 || p2 != 2) throw MissingDiffOp("d_y^2 coefficient must be y^2");
    double k1 = 0;
    if (y1 != op.terms.end()) {
        auto [c, p] = y_monomial(y1->second, "d_y coefficient");
        if (p != 1) throw MissingDiffOp("d_y coefficient must be proportional to y");
        k1 = c;
    }
    if (k1 != -(m - 2)) throw ConfigError("radial part is not symmetric for the measure y^-" + std::to_string(m));
    for (const auto& [idx, c] : op.terms) {
        if (idx.count("y")) {
            if (idx.size() != 1) throw MissingDiffOp("mixed y derivative in " + multi_index_str(idx));
            continue;
        }
        if (idx.size() != 1 || idx.begin()->second != 2) throw MissingDiffOp("unsupported term " + multi_index_str(idx));
        auto [k, p] = y_monomial(c, "coefficient of " + multi_index_str(idx));
        if ((p != 2 && p != 4) || k <= 0) throw MissingDiffOp("tangential coefficient must be positive times y^2 or y^4");
        D.directions.push_back(idx.begin()->first);
        D.power.push_back(p);
        D.kappa.push_back(k);
    }
    if (static_cast<int>(D.directions.size()) != grid.d)
        throw GridMismatch("operator has " + std::to_string(D.directions.size()) + " torus directions, grid has " +
                           std::to_string(grid.d));

    const int n = grid.n();
    D.w_half.resize(static_cast<std::size_t>(n - 1));
    for (int k = 0; k + 1 < n; ++k)
        D.w_half[static_cast<std::size_t>(k)] = std::exp((1 - m) * 0.5 * (grid.tau[static_cast<std::size_t>(k)] + grid.tau[static_cast<std::size_t>(k + 1)]));
    D.mass.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        double w = std::exp((1 - m) * grid.tau[static_cast<std::size_t>(k)]);
        double left = k > 0 ? grid.hc[static_cast<std::size_t>(k - 1)] : 0.0;
        double right = k + 1 < n ? grid.hc[static_cast<std::size_t>(k)] : 0.0;
        D.mass[static_cast<std::size_t>(k)] = w * 0.5 * (left + right);
    }
    D.V2.assign(static_cast<std::size_t>(grid.mode_count()), std::vector<double>(static_cast<std::size_t>(n), 0.0));
    D.V4 = D.V2;
    for (int q = 0; q < grid.mode_count(); ++q) {
        double s2 = 0, s4 = 0;
        const auto& xi = grid.modes[static_cast<std::size_t>(q)];
        for (std::size_t c = 0; c < xi.size(); ++c) {
            double v = D.kappa[c] * xi[c] * xi[c];
            (D.power[c] == 2 ? s2 : s4) += v;
        }
        for (int k = 0; k < n; ++k) {
            double y2 = grid.y[static_cast<std::size_t>(k)] * grid.y[static_cast<std::size_t>(k)];
            D.V2[static_cast<std::size_t>(q)][static_cast<std::size_t>(k)] = kTwoPi2 * s2 * y2;
            D.V4[static_cast<std::size_t>(q)][static_cast<std::size_t>(k)] = kTwoPi2 * s4 * y2 * y2;
        }
    }
    D.active.assign(static_cast<std::size_t>(grid.mode_count()), std::vector<char>(static_cast<std::size_t>(n), 1));
    for (auto& a : D.active) a.back() = 0;
    return D;
}

DiscreteOperator assemble(Family family, const CylinderGrid& grid) {
    if (family != grid.params.family) throw GridMismatch("grid was built for another family");
    return assemble(standard_laplacian(family, grid.params.r).op, grid);
}

DiscreteOperator apply_pseudocusp_constraint(const DiscreteOperator& op, double a) {
    const auto& g = op.grid;
    if (!(a >= g.y.front() && a <= g.y.back())) throw CutOutsideDomain("cut height outside [y_lo, y_hi]");
    DiscreteOperator out = op;
    out.cut = a;
    if (g.zero_mode >= 0)
        for (int k = 0; k < g.n(); ++k)
            if (g.y[static_cast<std::size_t>(k)] >= a) out.active[static_cast<std::size_t>(g.zero_mode)][static_cast<std::size_t>(k)] = 0;
    return out;
}

GridFunction GridFunction::zero(const CylinderGrid& g) {
    GridFunction f;
    f.modes.assign(static_cast<std::size_t>(g.mode_count()), Eigen::VectorXcd::Zero(g.n()));
    return f;
}

GridFunction random_grid_function(const DiscreteOperator& op, std::mt19937_64& rng, bool respect_constraint) {
    const auto& g = op.grid;
    GridFunction f = GridFunction::zero(g);
    std::normal_distribution<double> nd;
    for (int q = 0; q < g.mode_count(); ++q) {
        std::vector<int> neg = g.modes[static_cast<std::size_t>(q)];
        for (int& v : neg) v = -v;
        int qn = g.mode_index(neg);
        if (qn < q) continue;  // filled from its partner
        auto& v = f.modes[static_cast<std::size_t>(q)];
        for (int k = 0; k < g.n(); ++k) {
            bool keep = respect_constraint ? op.active[static_cast<std::size_t>(q)][static_cast<std::size_t>(k)] != 0
                                           : k + 1 < g.n();
            std::complex<double> z(nd(rng), qn == q ? 0.0 : nd(rng));
            v(k) = keep ? z : 0.0;
        }
        if (qn != q) f.modes[static_cast<std::size_t>(qn)] = v.conjugate();
    }
    return f;
}

namespace {

void check_shape(const DiscreteOperator& op, const GridFunction& f) {
    if (static_cast<int>(f.modes.size()) != op.grid.mode_count()) throw GridMismatch("mode count differs");
    for (const auto& v : f.modes)
        if (v.size() != op.grid.n()) throw GridMismatch("node count differs");
}

}  // namespace

FormParts form_parts(const DiscreteOperator& op, const GridFunction& f) {
    check_shape(op, f);
    FormParts fp;
    const int n = op.grid.n();
    for (int q = 0; q < op.grid.mode_count(); ++q) {
        const auto& v = f.modes[static_cast<std::size_t>(q)];
        for (int k = 0; k + 1 < n; ++k)
            fp.radial += op.w_half[static_cast<std::size_t>(k)] * std::norm(v(k + 1) - v(k)) / op.grid.hc[static_cast<std::size_t>(k)];
        for (int k = 0; k < n; ++k) {
            double mk = op.mass[static_cast<std::size_t>(k)] * std::norm(v(k));
            fp.tangential2 += op.V2[static_cast<std::size_t>(q)][static_cast<std::size_t>(k)] * mk;
            fp.tangential4 += op.V4[static_cast<std::size_t>(q)][static_cast<std::size_t>(k)] * mk;
        }
    }
    return fp;
}

double quadratic_form(const DiscreteOperator& op, const GridFunction& f) { return form_parts(op, f).total(); }

double mass_norm2(const DiscreteOperator& op, const GridFunction& f) {
    check_shape(op, f);
    double s = 0;
    for (const auto& v : f.modes)
        for (int k = 0; k < v.size(); ++k) s += op.mass[static_cast<std::size_t>(k)] * std::norm(v(k));
    return s;
}

double b1_norm(const DiscreteOperator& op, const GridFunction& f) { return mass_norm2(op, f) + quadratic_form(op, f); }

double tail_norm(const DiscreteOperator& op, const GridFunction& f, double c) {
    check_shape(op, f);
    double s = 0;
    for (const auto& v : f.modes)
        for (int k = 0; k < v.size(); ++k)
            if (op.grid.y[static_cast<std::size_t>(k)] > c) s += op.mass[static_cast<std::size_t>(k)] * std::norm(v(k));
    return std::sqrt(s);
}

double perturbed_fragment(const DiscreteOperator& op, const GridFunction& f, double a, double c) {
    check_shape(op, f);
    double s = 0;
    for (int q = 0; q < op.grid.mode_count(); ++q)
        for (int k = 0; k < op.grid.n(); ++k) {
            double y = op.grid.y[static_cast<std::size_t>(k)];
            if (y <= c) continue;
            // V4 = 4 pi^2 s4 y^4, so the (y^2 - a^2) y^2 weight is V4 (1 - a^2 / y^2)
            double w = op.V4[static_cast<std::size_t>(q)][static_cast<std::size_t>(k)] * (1.0 - a * a / (y * y));
            s += w * op.mass[static_cast<std::size_t>(k)] * std::norm(f.modes[static_cast<std::size_t>(q)](k));
        }
    return s;
}

std::pair<double, double> tangential_split(const DiscreteOperator& op, const GridFunction& f, double a) {
    check_shape(op, f);
    double sy = 0, sa = 0;
    for (int q = 0; q < op.grid.mode_count(); ++q)
        for (int k = 0; k < op.grid.n(); ++k) {
            double y = op.grid.y[static_cast<std::size_t>(k)];
            if (y < a) continue;
            double y2 = y * y;
            double m2 = op.mass[static_cast<std::size_t>(k)] * std::norm(f.modes[static_cast<std::size_t>(q)](k));
            double s2 = op.V2[static_cast<std::size_t>(q)][static_cast<std::size_t>(k)] / y2;
            double s4 = op.V4[static_cast<std::size_t>(q)][static_cast<std::size_t>(k)] / (y2 * y2);
            sy += (s2 + y2 * s4) * m2;
            sa += (s2 + a * a * s4) * m2;
        }
    return {sy, sa};
}

TailBoundResult check_tail_bound(const DiscreteOperator& op, const GridFunction& f, double c) {
    check_shape(op, f);
    if (!op.cut) throw ConstraintViolated("operator carries no pseudo-cuspform constraint");
    if (c < *op.cut) throw ConstraintViolated("tail height c must be at least the cut a");
    const int z = op.grid.zero_mode;
    for (int k = 0; k < op.grid.n(); ++k)
        if (!op.active[static_cast<std::size_t>(z)][static_cast<std::size_t>(k)] && k + 1 < op.grid.n() &&
            f.modes[static_cast<std::size_t>(z)](k) != 0.0)
            throw ConstraintViolated("zero mode does not vanish above the cut");
    TailBoundResult t;
    t.bound = 1.0 / (c * c);
    double tn = tail_norm(op, f, c);
    t.tail2 = tn * tn;
    t.b1 = b1_norm(op, f);
    t.ratio = t.b1 == 0 ? 0 : t.tail2 / t.b1;
    t.holds = t.ratio <= t.bound;
    return t;
}

namespace {

struct ModeProblem {
    std::vector<int> dofs;
    Eigen::VectorXd diag, sub, msqrt;  // symmetric tridiagonal M^{-1/2} K M^{-1/2}
};

ModeProblem mode_problem(const DiscreteOperator& op, int q) {
    ModeProblem mp;
    const int n = op.grid.n();
    for (int k = 0; k < n; ++k)
        if (op.active[static_cast<std::size_t>(q)][static_cast<std::size_t>(k)]) mp.dofs.push_back(k);
    const int N = static_cast<int>(mp.dofs.size());
    mp.diag.resize(N);
    mp.sub.resize(std::max(N - 1, 0));
    mp.msqrt.resize(N);
    const auto& hc = op.grid.hc;
    for (int i = 0; i < N; ++i) {
        int k = mp.dofs[static_cast<std::size_t>(i)];
        double kd = op.potential(q, k) * op.mass[static_cast<std::size_t>(k)];
        if (k > 0) kd += op.w_half[static_cast<std::size_t>(k - 1)] / hc[static_cast<std::size_t>(k - 1)];
        if (k + 1 < n) kd += op.w_half[static_cast<std::size_t>(k)] / hc[static_cast<std::size_t>(k)];
        mp.msqrt(i) = std::sqrt(op.mass[static_cast<std::size_t>(k)]);
        mp.diag(i) = kd / (mp.msqrt(i) * mp.msqrt(i));
    }
    for (int i = 0; i + 1 < N; ++i) {
        int k = mp.dofs[static_cast<std::size_t>(i)];
        double off = mp.dofs[static_cast<std::size_t>(i + 1)] == k + 1 ? -op.w_half[static_cast<std::size_t>(k)] / hc[static_cast<std::size_t>(k)] : 0.0;
        mp.sub(i) = off / (mp.msqrt(i) * mp.msqrt(i + 1));
    }
    return mp;
}

// Solves the tridiagonal system (T + sigma I) x = b.
Eigen::VectorXd shifted_tridiagonal_solve(const ModeProblem& mp, const Eigen::VectorXd& b, double sigma = 1.0) {
    const Eigen::Index N = b.size();
    Eigen::VectorXd c(N), d(N), x(N);
    double den = mp.diag(0) + sigma;
    c(0) = N > 1 ? mp.sub(0) / den : 0.0;
    d(0) = b(0) / den;
    for (Eigen::Index i = 1; i < N; ++i) {
        den = mp.diag(i) + sigma - mp.sub(i - 1) * c(i - 1);
        c(i) = i + 1 < N ? mp.sub(i) / den : 0.0;
        d(i) = (b(i) - mp.sub(i - 1) * d(i - 1)) / den;
    }
    x(N - 1) = d(N - 1);
    for (Eigen::Index i = N - 2; i >= 0; --i) x(i) = d(i) - c(i) * x(i + 1);
    return x;
}

}  // namespace

SpectrumResult spectrum(const DiscreteOperator& op, int k) {
    if (k <= 0) throw SolverFailure("k must be positive");
    struct Pair {
        double value, residual;
        int mode;
        double resolvent;
    };
    std::vector<Pair> all;
    for (int q = 0; q < op.grid.mode_count(); ++q) {
        ModeProblem mp = mode_problem(op, q);
        if (mp.dofs.empty()) continue;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        es.computeFromTridiagonal(mp.diag, mp.sub, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) throw SolverFailure("tridiagonal eigensolver failed");
        const Eigen::Index take = std::min<Eigen::Index>(k, es.eigenvalues().size());
        for (Eigen::Index j = 0; j < take; ++j) {
            double lam = es.eigenvalues()(j);
            // eigenvector by inverse iteration with a slightly perturbed shift
            double shift = -lam - 1e-10 * std::max(1.0, std::abs(lam));
            Eigen::VectorXd v = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(mp.dofs.size()));
            for (int it = 0; it < 3; ++it) {
                v = shifted_tridiagonal_solve(mp, v, shift);
                v /= v.norm();
            }
            // residual of T v = lambda v
            Eigen::VectorXd Tv = mp.diag.cwiseProduct(v);
            for (Eigen::Index i = 0; i + 1 < v.size(); ++i) {
                Tv(i) += mp.sub(i) * v(i + 1);
                Tv(i + 1) += mp.sub(i) * v(i);
            }
            double res = (Tv - lam * v).norm() / std::max(1.0, std::abs(lam));
            // (M + K)^{-1} M u = u / (1 + lambda); in symmetric variables (T + I)^{-1} v
            double rerr = (shifted_tridiagonal_solve(mp, v) - v / (1.0 + lam)).norm();
            all.push_back({lam, res, q, rerr});
        }
    }
    std::sort(all.begin(), all.end(), [](const Pair& a, const Pair& b) {
        return a.value != b.value ? a.value < b.value : a.mode < b.mode;
    });
    SpectrumResult out;
    for (int j = 0; j < k && j < static_cast<int>(all.size()); ++j) {
        const auto& p = all[static_cast<std::size_t>(j)];
        out.eigenvalues.push_back(p.value);
        out.residuals.push_back(p.residual);
        out.mode.push_back(p.mode);
        out.resolvent_error = std::max(out.resolvent_error, p.resolvent);
        if (p.residual > 1e-8) throw SolverFailure("eigenpair residual " + std::to_string(p.residual));
    }
    const double kmin = op.kappa.empty() ? 0.0 : *std::min_element(op.kappa.begin(), op.kappa.end());
    const double xm = op.grid.params.xi_max + 1.0;
    const double y0 = op.grid.y.front();
    out.truncation_floor = kTwoPi2 * kmin * xm * xm * y0 * y0;
    return out;
}

int count_below(const DiscreteOperator& op, double lambda) {
    int count = 0;
    for (int q = 0; q < op.grid.mode_count(); ++q) {
        ModeProblem mp = mode_problem(op, q);
        if (mp.dofs.empty()) continue;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        es.computeFromTridiagonal(mp.diag, mp.sub, Eigen::EigenvaluesOnly);
        for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j)
            if (es.eigenvalues()(j) < lambda) ++count;
    }
    return count;
}

std::vector<double> mode_eigenvalues(const DiscreteOperator& op, int mode) {
    if (mode < 0 || mode >= op.grid.mode_count()) throw GridMismatch("mode index out of range");
    ModeProblem mp = mode_problem(op, mode);
    if (mp.dofs.empty()) return {};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(mp.diag, mp.sub, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw SolverFailure("tridiagonal eigensolver failed");
    return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

// ---------------------------------------------------------------- cutoffs

double smooth_step(double x) {
    if (x <= 0) return 0;
    if (x >= 1) return 1;
    double a = std::exp(-1.0 / x), b = std::exp(-1.0 / (1.0 - x));
    return a / (a + b);
}

double smooth_step_d1(double x) {
    if (x <= 0 || x >= 1) return 0;
    double a = std::exp(-1.0 / x), b = std::exp(-1.0 / (1.0 - x));
    double s = a + b;
    return a * b * (1.0 / (x * x) + 1.0 / ((1.0 - x) * (1.0 - x))) / (s * s);
}

namespace {

struct StepBounds {
    double d1 = 0, d2 = 0;
};

// Sampled sup of |psi'| and |psi''| with a 1% margin.
const StepBounds& step_bounds() {
    static const StepBounds b = [] {
        StepBounds r;
        const int N = 20000;
        const double e = 1e-6;
        for (int i = 1; i < N; ++i) {
            double x = static_cast<double>(i) / N;
            r.d1 = std::max(r.d1, std::abs(smooth_step_d1(x)));
            r.d2 = std::max(r.d2, std::abs(smooth_step_d1(x + e) - smooth_step_d1(x - e)) / (2 * e));
        }
        r.d1 *= 1.01;
        r.d2 *= 1.01;
        return r;
    }();
    return b;
}

}  // namespace

CutoffProfile cutoff_phi_t(double t) {
    if (!(t >= 1)) throw BadParameters("phi_t needs t >= 1");
    CutoffProfile c;
    c.value = [t](double y) { return smooth_step((y - t) / t); };
    c.d1 = [t](double y) { return smooth_step_d1((y - t) / t) / t; };
    c.sup_d1 = step_bounds().d1;
    c.sup_d2 = step_bounds().d2;
    c.label = "phi_t(y) = psi((y - t) / t)";
    return c;
}

CutoffProfile cutoff_beta_t(double t, double a, double e) {
    if (!(t >= 1)) throw BadParameters("beta_t needs t >= 1");
    if (!(e > 0)) throw BadParameters("height exponent must be positive");
    CutoffProfile c;
    c.value = [=](double y) { return smooth_step(t * (std::pow(y, e) - a) + 1.0); };
    c.d1 = [=](double y) { return smooth_step_d1(t * (std::pow(y, e) - a) + 1.0) * t * e * std::pow(y, e - 1); };
    c.sup_d1 = step_bounds().d1;
    c.sup_d2 = step_bounds().d2;
    c.label = "beta_t(y) = beta(t (y^e - a)), beta(u) = psi(u + 1)";
    return c;
}

CutoffProfile cutoff_tau(double a2, double a1) {
    if (!(a2 > 0 && a2 < a1)) throw BadParameters("tau needs 0 < a'' < a'");
    CutoffProfile c;
    const double w = a1 - a2;
    c.value = [=](double y) { return smooth_step((y - a2) / w); };
    c.d1 = [=](double y) { return smooth_step_d1((y - a2) / w) / w; };
    c.sup_d1 = step_bounds().d1;
    c.sup_d2 = step_bounds().d2;
    c.label = "tau(y) = psi((y - a'') / (a' - a''))";
    return c;
}

TruncationResult check_truncation_bound(const DiscreteOperator& op, const GridFunction& f, double t) {
    check_shape(op, f);
    CutoffProfile phi = cutoff_phi_t(t);
    GridFunction ft = f;
    for (auto& v : ft.modes)
        for (int k = 0; k < v.size(); ++k) v(k) *= phi.value(op.grid.y[static_cast<std::size_t>(k)]);
    TruncationResult r;
    r.lhs = b1_norm(op, ft);
    r.rhs = b1_norm(op, f);
    // |d_tau phi_t| <= 2 sup|psi'| =: D; |f^[t]|^2 <= max(2, 1 + 4 D^2) |f|^2
    const double D = 2.0 * phi.sup_d1;
    r.constant = std::max(2.0, 1.0 + 4.0 * D * D);
    r.ratio = r.rhs == 0 ? 0 : r.lhs / r.rhs;
    r.holds = r.lhs <= r.constant * r.rhs * (1 + 1e-12);
    return r;
}

GradientIdentity gradient_identity_check(const DiscreteOperator& op, const GridFunction& f) {
    check_shape(op, f);
    const int n = op.grid.n(), m = op.grid.m;
    const auto& hc = op.grid.hc;
    for (const auto& v : f.modes)
        if (v(0) != 0.0 || v(1) != 0.0 || v(n - 1) != 0.0 || v(n - 2) != 0.0)
            throw GridMismatch("gradient identity needs f to vanish at the two end nodes on each side");
    GradientIdentity g;
    for (int q = 0; q < op.grid.mode_count(); ++q) {
        const auto& v = f.modes[static_cast<std::size_t>(q)];
        for (int k = 1; k + 1 < n; ++k) {
            const double hl = hc[static_cast<std::size_t>(k - 1)], hr = hc[static_cast<std::size_t>(k)];
            std::complex<double> gl = (v(k) - v(k - 1)) / hl, gr = (v(k + 1) - v(k)) / hr;
            std::complex<double> d2 = 2.0 * (gr - gl) / (hl + hr);
            std::complex<double> d1 = (hl * gr + hr * gl) / (hl + hr);
            std::complex<double> Lf = d2 - static_cast<double>(m - 1) * d1 - op.potential(q, k) * v(k);
            g.lhs -= op.mass[static_cast<std::size_t>(k)] * std::real(std::conj(v(k)) * Lf);
            g.rhs += op.mass[static_cast<std::size_t>(k)] * (std::norm(d1) + op.potential(q, k) * std::norm(v(k)));
        }
    }
    return g;
}

}  // namespace rankone
