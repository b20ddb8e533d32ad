#include "codesign/decompose.hpp"

#include <algorithm>
#include <cmath>

#include "codesign/optimizer.hpp"

namespace codesign {

namespace {

constexpr cplx I1{0.0, 1.0};
constexpr double kCoordTol = 1e-9;
constexpr double kSycSuccess = 1.0 - 1e-8;
constexpr double kKeyQuantum = 1e-10;

// V(theta) = L_k G ... G L_0 with L_j = zyz(theta[6j..6j+2]) (x) zyz(theta[6j+3..6j+5]).
class TemplateModel {
public:
    TemplateModel(const Mat4& target, const Mat4& g, int k) : udag_(target.adjoint()), g_(g), k_(k) {}

    int dim() const { return 6 * (k_ + 1); }

    Mat4 build(const Eigen::VectorXd& th) const {
        Mat4 v = local(th, 0);
        for (int j = 1; j <= k_; ++j)
            v = local(th, j) * g_ * v;
        return v;
    }

    double value(const Eigen::VectorXd& th) const {
        cplx t = (udag_ * build(th)).trace();
        return 1.0 - std::norm(t) / 16.0;
    }

    double value_grad(const Eigen::VectorXd& th, Eigen::VectorXd& grad) const {
        const int n = k_ + 1;
        std::vector<Mat2> a(n), b(n);
        std::vector<std::array<Mat2, 3>> da(n), db(n);
        std::vector<Mat4> l(n);
        for (int j = 0; j < n; ++j) {
            euler(th, 6 * j, a[j], da[j]);
            euler(th, 6 * j + 3, b[j], db[j]);
            l[j] = kron(a[j], b[j]);
        }
        std::vector<Mat4> right(n, Mat4::Identity()), left(n, Mat4::Identity());
        for (int j = 0; j + 1 < n; ++j)
            right[j + 1] = g_ * l[j] * right[j];
        for (int j = n - 2; j >= 0; --j)
            left[j] = left[j + 1] * l[j + 1] * g_;
        cplx t = (udag_ * left[0] * l[0]).trace();
        cplx tc = std::conj(t);

        // Tr(M (X (x) Y)) = sum_ij X_ij Tr(M_(j,i) Y), with M_(j,i) the 2x2 block at (2j, 2i).
        for (int j = 0; j < n; ++j) {
            Mat4 m = right[j] * udag_ * left[j];
            Mat2 q, p = Mat2::Zero();
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) {
                    Mat2 blk = m.block<2, 2>(2 * c, 2 * r);
                    q(r, c) = (blk * b[j]).trace();
                    p += a[j](r, c) * blk;
                }
            for (int s = 0; s < 3; ++s) {
                cplx dta = (da[j][s].cwiseProduct(q)).sum();
                cplx dtb = (p * db[j][s]).trace();
                grad(6 * j + s) = -2.0 * std::real(tc * dta) / 16.0;
                grad(6 * j + 3 + s) = -2.0 * std::real(tc * dtb) / 16.0;
            }
        }
        return 1.0 - std::norm(t) / 16.0;
    }

    static Mat4 local(const Eigen::VectorXd& th, int j) {
        return kron(zyz(th(6 * j), th(6 * j + 1), th(6 * j + 2)), zyz(th(6 * j + 3), th(6 * j + 4), th(6 * j + 5)));
    }

private:
    static void euler(const Eigen::VectorXd& th, int o, Mat2& m, std::array<Mat2, 3>& d) {
        Mat2 ra = rz(th(o)), rb = ry(th(o + 1)), rc = rz(th(o + 2));
        Mat2 hz = -0.5 * I1 * pauli_z(), hy = -0.5 * I1 * pauli_y();
        m = ra * rb * rc;
        d[0] = hz * m;
        d[1] = ra * hy * rb * rc;
        d[2] = m * hz;
    }

    Mat4 udag_;
    Mat4 g_;
    int k_;
};

struct SynthOutcome {
    Eigen::VectorXd theta;
    double f = 1.0;
};

SynthOutcome run_restarts(const TemplateModel& model, int k, const OptimizerConfig& cfg, int r_begin, int r_end,
                          const std::vector<Eigen::VectorXd>& warm, SynthOutcome best) {
    BfgsOptions bo;
    bo.max_iterations = cfg.max_iterations;
    bo.f_target = cfg.convergence_tol;
    ObjectiveFn fn;
    if (cfg.gradient == GradientMode::Analytic) {
        fn = [&](const Eigen::VectorXd& x, Eigen::VectorXd& g) { return model.value_grad(x, g); };
    } else {
        const double h = cfg.gradient_step;
        fn = [&, h](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
            Eigen::VectorXd xp = x;
            for (Eigen::Index i = 0; i < x.size(); ++i) {
                xp(i) = x(i) + h;
                double fp = model.value(xp);
                xp(i) = x(i) - h;
                double fm = model.value(xp);
                xp(i) = x(i);
                g(i) = (fp - fm) / (2 * h);
            }
            return model.value(x);
        };
    }
    auto attempt = [&](const Eigen::VectorXd& x0) {
        BfgsResult r = bfgs_minimize(fn, x0, bo);
        double f = model.value(r.x);
        if (best.theta.size() == 0 || f < best.f) {
            best.f = f;
            best.theta = r.x;
        }
    };
    for (const auto& w : warm) {
        if (best.theta.size() && best.f <= cfg.convergence_tol)
            return best;
        attempt(w);
    }
    for (int r = r_begin; r < r_end; ++r) {
        if (best.theta.size() && best.f <= cfg.convergence_tol)
            break;
        Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(r) * 131 + static_cast<std::uint64_t>(k)));
        Eigen::VectorXd x0(model.dim());
        for (Eigen::Index i = 0; i < x0.size(); ++i)
            x0(i) = rng.uniform(-kPi, kPi);
        attempt(x0);
    }
    return best;
}

// Gauss-Newton on the entrywise residual V(theta) - phase * U. BFGS on 1 - F
// stalls near 1e-13 in F, which is still ~1e-6 per matrix entry.
Eigen::VectorXd polish(const TemplateModel& model, const Mat4& target, Eigen::VectorXd th) {
    auto resid = [&](const Eigen::VectorXd& x) {
        Mat4 v = model.build(x);
        cplx t = (target.adjoint() * v).trace();
        cplx ph = std::abs(t) > 0 ? t / std::abs(t) : cplx(1.0, 0.0);
        Mat4 d = v - ph * target;
        Eigen::VectorXd r(32);
        for (int i = 0; i < 16; ++i) {
            r(i) = d(i / 4, i % 4).real();
            r(16 + i) = d(i / 4, i % 4).imag();
        }
        return r;
    };
    const double h = 1e-7;
    Eigen::VectorXd r = resid(th);
    for (int it = 0; it < 12 && r.norm() > 1e-14; ++it) {
        Eigen::MatrixXd jac(32, th.size());
        Eigen::VectorXd xp = th;
        for (Eigen::Index i = 0; i < th.size(); ++i) {
            xp(i) = th(i) + h;
            Eigen::VectorXd rp = resid(xp);
            xp(i) = th(i) - h;
            jac.col(i) = (rp - resid(xp)) / (2 * h);
            xp(i) = th(i);
        }
        Eigen::VectorXd cand = th + jac.completeOrthogonalDecomposition().solve(-r);
        Eigen::VectorXd rc = resid(cand);
        if (!(rc.norm() < r.norm()))
            break;
        th = cand;
        r = rc;
    }
    return th;
}

DecompResult to_result(const GateKind& basis, int k, const Eigen::VectorXd& th, const Mat4& target) {
    DecompResult out;
    out.basis = basis;
    out.count = k;
    out.locals.reserve(static_cast<std::size_t>(k + 1));
    for (int j = 0; j <= k; ++j) {
        LocalPair lp;
        lp.a = Unitary2::checked(zyz(th(6 * j), th(6 * j + 1), th(6 * j + 2)));
        lp.b = Unitary2::checked(zyz(th(6 * j + 3), th(6 * j + 4), th(6 * j + 5)));
        out.locals.push_back(lp);
    }
    out.decomp_fidelity = hs_fidelity(target, out.reconstruct());
    out.exact = out.decomp_fidelity >= kExactFidelity;
    return out;
}

Eigen::VectorXd pad_with_inverse_pair(const Eigen::VectorXd& th) {
    // (Z(x)I) G (Z(x)I) G = I for G in the iSWAP family
    Eigen::VectorXd out = Eigen::VectorXd::Zero(th.size() + 12);
    out.head(th.size()) = th;
    out(th.size()) = kPi;
    out(th.size() + 6) = kPi;
    return out;
}

bool is_iswap_family(const GateKind& g) {
    return g.tag() == GateTag::NthRootIswap || g.tag() == GateTag::ISWAP;
}

bool near(const WeylCoordinates& a, const WeylCoordinates& b) {
    return coordinate_distance(a, b) <= kCoordTol;
}

DecompResult stitch(const KakDecomposition& kak, const GateKind& basis, int k, const std::vector<LocalPair>& canon,
                    const Unitary4& u) {
    DecompResult out;
    out.basis = basis;
    out.count = k;
    out.locals = canon;
    out.locals.back().a = kak.a1 * out.locals.back().a;
    out.locals.back().b = kak.b1 * out.locals.back().b;
    out.locals.front().a = out.locals.front().a * kak.a0;
    out.locals.front().b = out.locals.front().b * kak.b0;
    out.decomp_fidelity = hs_fidelity(u.matrix(), out.reconstruct());
    out.exact = out.decomp_fidelity >= kExactFidelity;
    return out;
}

} // namespace

Mat4 DecompResult::reconstruct() const {
    Mat4 g = gate_matrix_2q(basis).matrix();
    Mat4 v = kron(locals.at(0).a.matrix(), locals.at(0).b.matrix());
    for (std::size_t j = 1; j < locals.size(); ++j)
        v = kron(locals[j].a.matrix(), locals[j].b.matrix()) * g * v;
    return v;
}

int cnot_count(const WeylCoordinates& c, double tol) {
    if (near(c, {0, 0, 0}) || coordinate_distance(c, {0, 0, 0}) <= tol)
        return 0;
    if (coordinate_distance(c, {kPi / 4, 0, 0}) <= tol)
        return 1;
    if (std::abs(c.z) <= tol)
        return 2;
    return 3;
}

int sqiswap_count(const WeylCoordinates& c, double tol) {
    if (coordinate_distance(c, {0, 0, 0}) <= tol)
        return 0;
    if (coordinate_distance(c, {kPi / 8, kPi / 8, 0}) <= tol)
        return 1;
    if (c.x >= c.y + std::abs(c.z) - tol)
        return 2;
    return 3;
}

DecompResult numeric_template_decompose(const Unitary4& u, const GateKind& basis, int k, const OptimizerConfig& cfg) {
    if (k < 0 || k > 8)
        throw Error(ErrorCode::InvalidArgument, "template length must be in 0..8");
    Mat4 g = gate_matrix_2q(basis).matrix();
    TemplateModel model(u.matrix(), g, k);
    SynthOutcome best = run_restarts(model, k, cfg, 0, cfg.restarts, {}, {});
    return to_result(basis, k, best.theta, u.matrix());
}

std::vector<DecompResult> template_sweep(const Unitary4& u, const GateKind& basis, int k_max,
                                         const OptimizerConfig& cfg) {
    if (k_max < 0 || k_max > 8)
        throw Error(ErrorCode::InvalidArgument, "template length must be in 0..8");
    Mat4 g = gate_matrix_2q(basis).matrix();
    std::vector<DecompResult> out;
    std::vector<Eigen::VectorXd> thetas;
    for (int k = 0; k <= k_max; ++k) {
        TemplateModel model(u.matrix(), g, k);
        std::vector<Eigen::VectorXd> warm;
        if (k >= 2 && is_iswap_family(basis))
            warm.push_back(pad_with_inverse_pair(thetas[static_cast<std::size_t>(k - 2)]));
        SynthOutcome best = run_restarts(model, k, cfg, 0, cfg.restarts, warm, {});
        thetas.push_back(best.theta);
        out.push_back(to_result(basis, k, best.theta, u.matrix()));
    }
    return out;
}

// ---- fixed-basis decomposition ----

BasisDecomposer::BasisDecomposer(GateKind basis, OptimizerConfig cfg) : basis_(std::move(basis)), cfg_(cfg) {
    if (basis_.arity() != 2)
        throw Error(ErrorCode::InvalidArgument, "basis gate must act on two qubits");
}

BasisDecomposer::Key BasisDecomposer::key_of(const WeylCoordinates& c) const {
    return {std::llround(c.x / kKeyQuantum), std::llround(c.y / kKeyQuantum), std::llround(c.z / kKeyQuantum)};
}

std::size_t BasisDecomposer::cache_size() const {
    std::lock_guard<std::mutex> lk(mu_);
    return cache_.size();
}

BasisDecomposer::Entry BasisDecomposer::canonical(const WeylCoordinates& raw) {
    Key key = key_of(raw);
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = cache_.find(key);
        if (it != cache_.end())
            return it->second;
    }
    // Synthesize at the quantized point so the cache content does not depend
    // on which caller arrived first.
    WeylCoordinates c{std::get<0>(key) * kKeyQuantum, std::get<1>(key) * kKeyQuantum, std::get<2>(key) * kKeyQuantum};
    Mat4 target = canonical_gate(c);
    Mat4 g = gate_matrix_2q(basis_).matrix();
    WeylCoordinates gc = weyl_coordinates(gate_matrix_2q(basis_));

    Entry e{0, {}, 0.0};
    auto synth = [&](int k, double threshold) -> bool {
        TemplateModel model(target, g, k);
        SynthOutcome best;
        for (int begin = 0; begin < cfg_.max_restarts; begin += cfg_.restarts) {
            int end = std::min(begin + cfg_.restarts, cfg_.max_restarts);
            best = run_restarts(model, k, cfg_, begin, end, {}, best);
            if (1.0 - best.f >= threshold)
                break;
        }
        if (best.f < 1e-6)
            best.theta = polish(model, target, best.theta);
        DecompResult r = to_result(basis_, k, best.theta, target);
        e = {k, r.locals, r.decomp_fidelity};
        return r.decomp_fidelity >= threshold;
    };

    bool ok = false;
    if (coordinate_distance(c, {0, 0, 0}) <= kCoordTol) {
        e = {0, {LocalPair{}}, 1.0};
        ok = true;
    } else if (basis_.tag() == GateTag::CNOT) {
        ok = synth(cnot_count(c), kExactFidelity);
    } else if (basis_.tag() == GateTag::NthRootIswap && basis_.root() == 2) {
        ok = synth(sqiswap_count(c), kExactFidelity);
    } else {
        // No closed-form region: climb from the smallest plausible length.
        const bool syc = basis_.tag() == GateTag::SYC;
        const int k_cap = syc ? 4 : 8;
        const double threshold = syc ? kSycSuccess : kExactFidelity;
        int k_min = near(c, gc) ? 1 : 2;
        for (int k = k_min; k <= k_cap && !ok; ++k)
            ok = synth(k, threshold);
    }
    if (!ok)
        throw Error(ErrorCode::SynthesisFailure,
                    "no template reached the fidelity target for basis " + basis_.label());
    std::lock_guard<std::mutex> lk(mu_);
    cache_.emplace(key, e);
    return e;
}

int BasisDecomposer::count(const WeylCoordinates& c) {
    if (coordinate_distance(c, {0, 0, 0}) <= kCoordTol)
        return 0;
    if (basis_.tag() == GateTag::CNOT)
        return cnot_count(c);
    if (basis_.tag() == GateTag::NthRootIswap && basis_.root() == 2)
        return sqiswap_count(c);
    return canonical(c).k;
}

DecompResult BasisDecomposer::decompose(const Unitary4& u) {
    const Mat4 g = gate_matrix_2q(basis_).matrix();
    if (hs_fidelity(u.matrix(), g) >= 1.0 - 1e-14) {
        DecompResult r;
        r.basis = basis_;
        r.count = 1;
        r.locals.assign(2, LocalPair{});
        r.decomp_fidelity = hs_fidelity(u.matrix(), g);
        r.exact = true;
        return r;
    }
    KakDecomposition kak = kak_decompose(u);
    Entry e = canonical(kak.coords);
    DecompResult r = stitch(kak, basis_, e.k, e.locals, u);
    const double threshold = basis_.tag() == GateTag::SYC ? kSycSuccess : kExactFidelity;
    if (r.decomp_fidelity < threshold)
        throw Error(ErrorCode::SynthesisFailure, "stitched decomposition lost fidelity");
    return r;
}

DecompResult decompose_exact(const Unitary4& u, const GateKind& basis, const OptimizerConfig& cfg) {
    BasisDecomposer d(basis, cfg);
    return d.decompose(u);
}

DecompResult decompose_syc(const Unitary4& u, const OptimizerConfig& cfg) {
    BasisDecomposer d(GateKind::syc(), cfg);
    return d.decompose(u);
}

// ---- fidelity model ----

double gate_fidelity(const FidelityModel& m) { return gate_fidelity(m.f_iswap, m.n); }

double total_fidelity(double decomp_fidelity, const FidelityModel& m, int k) {
    if (k < 0)
        throw Error(ErrorCode::InvalidArgument, "k must be >= 0");
    return decomp_fidelity * std::pow(gate_fidelity(m), k);
}

RootChoice best_root_choice(const Unitary4& u, double f_iswap, const std::vector<int>& roots, int k_max,
                            const OptimizerConfig& cfg) {
    if (roots.empty())
        throw Error(ErrorCode::InvalidArgument, "no roots given");
    Mat4 target = canonical_gate(weyl_coordinates(u)); // fidelity is invariant under the KAK locals
    Unitary4 tu = Unitary4::checked(target);
    constexpr double kTie = 1e-9;
    RootChoice best;
    bool have = false;
    for (int n : roots) {
        if (n < 1 || n > 8)
            throw Error(ErrorCode::InvalidArgument, "root must be in 1..8");
        auto sweep = template_sweep(tu, GateKind::nth_root_iswap(n), k_max, cfg);
        for (int k = 0; k <= k_max; ++k) {
            RootChoice c;
            c.n = n;
            c.k = k;
            c.decomp_fidelity = sweep[static_cast<std::size_t>(k)].decomp_fidelity;
            c.total_fidelity = total_fidelity(c.decomp_fidelity, {f_iswap, n}, k);
            c.duration = static_cast<double>(k) / n;
            bool better = !have || c.total_fidelity > best.total_fidelity + kTie ||
                          (std::abs(c.total_fidelity - best.total_fidelity) <= kTie &&
                           (c.duration < best.duration - 1e-12 ||
                            (std::abs(c.duration - best.duration) <= 1e-12 && c.k < best.k)));
            if (better) {
                best = c;
                have = true;
            }
        }
    }
    return best;
}

} // namespace codesign
