#include "slfv/wm.hpp"

#include <cmath>
#include <stdexcept>

namespace slfv {

Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& A, double scale) {
    if (A.rows() != A.cols()) throw std::domain_error("matrix_exponential: matrix must be square");
    if (!((scale * A).array().isFinite()).all())
        throw std::domain_error("matrix_exponential: non-finite input");
    const Eigen::Index n = A.rows();
    Eigen::MatrixXd B = scale * A;
    double norm = B.cwiseAbs().rowwise().sum().maxCoeff(); // infinity norm
    int s = 0;
    if (norm > 0.0) s = std::max(0, static_cast<int>(std::ceil(std::log2(norm))));
    B /= std::pow(2.0, s);

    Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
    for (int k = 1; k <= 60; ++k) {
        term = (term * B) / k;
        sum += term;
        double tn = term.cwiseAbs().rowwise().sum().maxCoeff();
        double sn = sum.cwiseAbs().rowwise().sum().maxCoeff();
        if (tn < 1e-16 * sn) break;
    }
    for (int i = 0; i < s; ++i) sum = sum * sum;
    return sum;
}

namespace {

// Round-off guard: tiny negatives are zeroed, anything materially negative is
// a genuine failure of the stochastic structure.
void clamp_nonnegative(Eigen::MatrixXd& m) {
    double worst = m.minCoeff();
    if (worst < -1e-13)
        throw std::runtime_error("transition matrix has a significantly negative entry: " +
                                 std::to_string(worst));
    m = m.cwiseMax(0.0);
}

} // namespace

KernelResult build_kernel(const SiteFunction& n, double mu, int t_max, double rate_scale, Boundary bc) {
    if (t_max < 1) throw std::invalid_argument("t_max must be >= 1");
    const Eigen::Index L = static_cast<Eigen::Index>(n.size());
    KernelResult out;
    out.kernel.Q = lineage_generator(n, bc);
    out.kernel.P = matrix_exponential(out.kernel.Q, rate_scale);
    clamp_nonnegative(out.kernel.P);
    out.kernel.D.resize(L);
    for (Eigen::Index i = 0; i < L; ++i) out.kernel.D(i) = 1.0 / (n[i] + 1.0);
    out.kernel.K.reserve(t_max + 1);
    out.kernel.K.push_back(Eigen::MatrixXd::Identity(L, L));
    Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(L, L);
    for (int t = 1; t <= t_max; ++t) {
        Eigen::MatrixXd Kt = out.kernel.K.back() * out.kernel.P;
        clamp_nonnegative(Kt);
        theta.noalias() +=
            std::exp(-2.0 * mu * t) * (Kt * out.kernel.D.asDiagonal() * Kt.transpose());
        out.kernel.K.push_back(std::move(Kt));
    }
    out.theta.theta = std::move(theta);
    out.theta.t_max = t_max;
    out.theta.mu = mu;
    out.theta.rate_scale = rate_scale;
    return out;
}

Eigen::MatrixXd theta_time_dependent(const PdeTrajectory& path, double mu, const ModelParams& p,
                                     double s0, double t, double rate_const, bool wmf_prefactor) {
    if (path.times.empty()) throw std::invalid_argument("theta_time_dependent: empty trajectory");
    // indices of the trajectory grid covering [s0, t]
    std::vector<size_t> idx;
    for (size_t i = 0; i < path.times.size(); ++i)
        if (path.times[i] >= s0 - 1e-12 && path.times[i] <= t + 1e-12) idx.push_back(i);
    if (idx.size() < 2) {
        const Eigen::Index L = static_cast<Eigen::Index>(path.profiles.front().size());
        return Eigen::MatrixXd::Zero(L, L); // empty time integral
    }
    const Eigen::Index L = static_cast<Eigen::Index>(path.profiles.front().size());

    // Backward sweep accumulating the trapezoid in s as G marches t -> s0.
    Eigen::MatrixXd G = Eigen::MatrixXd::Identity(L, L);
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(L, L);
    auto integrand = [&](size_t i) {
        const SiteFunction& ns = path.profiles[idx[i]];
        Eigen::VectorXd D(L);
        for (Eigen::Index z = 0; z < L; ++z) D(z) = 1.0 / (ns[z] + 1.0);
        double disc = std::exp(-2.0 * mu * (path.times[idx.back()] - path.times[idx[i]]));
        return Eigen::MatrixXd(disc * (G.transpose() * D.asDiagonal() * G));
    };
    Eigen::MatrixXd prev = integrand(idx.size() - 1);
    for (size_t j = idx.size() - 1; j-- > 0;) {
        double ds = path.times[idx[j + 1]] - path.times[idx[j]];
        SiteFunction mid(L);
        for (Eigen::Index z = 0; z < L; ++z)
            mid[z] = 0.5 * (path.profiles[idx[j]][z] + path.profiles[idx[j + 1]][z]);
        Eigen::MatrixXd Qmid = lineage_generator(mid, p.boundary);
        G = matrix_exponential(Qmid.transpose(), ds * rate_const) * G;
        Eigen::MatrixXd cur = integrand(j);
        W.noalias() += 0.5 * ds * (prev + cur);
        prev = std::move(cur);
    }
    if (wmf_prefactor) {
        double uVR = p.u * p.ball_volume();
        W *= uVR * uVR;
    }
    return W;
}

Eigen::MatrixXd align_prediction(const Eigen::MatrixXd& theta, double N, double delta) {
    return theta / (N * delta);
}

Eigen::MatrixXd align_simulation(const Eigen::MatrixXd& probabilities, double N, double delta) {
    return probabilities * (N * delta);
}

} // namespace slfv
