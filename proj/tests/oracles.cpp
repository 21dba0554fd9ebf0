#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace oracle {

namespace {

// Wang-Bovik Q over one window, unbiased moments.
bool q_window(const std::vector<double>& a, const std::vector<double>& b, double& q_out) {
    const std::size_t n = a.size();
    if (n < 2) return false;
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double va = 0.0, vb = 0.0, vab = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        va += (a[i] - ma) * (a[i] - ma);
        vb += (b[i] - mb) * (b[i] - mb);
        vab += (a[i] - ma) * (b[i] - mb);
    }
    va /= static_cast<double>(n - 1);
    vb /= static_cast<double>(n - 1);
    vab /= static_cast<double>(n - 1);
    if (va + vb == 0.0 || ma * ma + mb * mb == 0.0) return false;
    q_out = 4.0 * vab * ma * mb / ((va + vb) * (ma * ma + mb * mb));
    return true;
}

double q_mean(const sdp::HyperCube& x, int bi, const sdp::HyperCube& y, int bj, int win) {
    const int h = x.height, w = x.width;
    const int ww = std::max(1, std::min({win, h, w}));
    double sum = 0.0;
    long count = 0;
    for (int r0 = 0; r0 + ww <= h; r0 += ww)
        for (int c0 = 0; c0 + ww <= w; c0 += ww) {
            std::vector<double> wa, wb;
            for (int r = r0; r < r0 + ww; ++r)
                for (int c = c0; c < c0 + ww; ++c) {
                    wa.push_back(x.at(bi, r, c));
                    wb.push_back(y.at(bj, r, c));
                }
            double q;
            if (q_window(wa, wb, q)) {
                sum += q;
                ++count;
            }
        }
    return count ? sum / static_cast<double>(count) : 0.0;
}

} // namespace

RefMetrics full_reference(const sdp::HyperCube& ref, const sdp::HyperCube& est, int ratio) {
    RefMetrics out;
    const int nb = ref.bands, h = ref.height, w = ref.width;
    const double np = static_cast<double>(h) * w;

    double mse_all = 0.0, psnr_sum = 0.0, ergas_sum = 0.0, uiqi_sum = 0.0;
    for (int b = 0; b < nb; ++b) {
        double mse = 0.0, mean_ref = 0.0;
        for (int r = 0; r < h; ++r)
            for (int c = 0; c < w; ++c) {
                const double d = ref.at(b, r, c) - est.at(b, r, c);
                mse += d * d;
                mean_ref += ref.at(b, r, c);
            }
        mse /= np;
        mean_ref /= np;
        mse_all += mse;
        psnr_sum += mse == 0.0 ? std::numeric_limits<double>::infinity()
                               : 10.0 * std::log10(1.0 / mse);
        ergas_sum += mse / (mean_ref * mean_ref);
        uiqi_sum += q_mean(ref, b, est, b, 32);
    }
    out.psnr_db = psnr_sum / nb;
    out.rmse = std::sqrt(mse_all / nb);
    out.ergas = 100.0 / ratio * std::sqrt(ergas_sum / nb);
    out.uiqi = uiqi_sum / nb;

    double sam_sum = 0.0;
    long sam_n = 0;
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) {
            double dot = 0.0, na = 0.0, ne = 0.0;
            for (int b = 0; b < nb; ++b) {
                dot += ref.at(b, r, c) * est.at(b, r, c);
                na += ref.at(b, r, c) * ref.at(b, r, c);
                ne += est.at(b, r, c) * est.at(b, r, c);
            }
            if (na == 0.0 || ne == 0.0) continue;
            double cosv = dot / (std::sqrt(na) * std::sqrt(ne));
            cosv = std::clamp(cosv, -1.0, 1.0);
            sam_sum += std::acos(cosv) * 180.0 / std::numbers::pi;
            ++sam_n;
        }
    out.sam_deg = sam_n ? sam_sum / static_cast<double>(sam_n) : 0.0;
    return out;
}

double fid(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    const auto moments = [](const Eigen::MatrixXd& s) {
        const Eigen::Index n = s.rows(), d = s.cols();
        Eigen::VectorXd mu = Eigen::VectorXd::Zero(d);
        for (Eigen::Index i = 0; i < n; ++i) mu += s.row(i).transpose();
        mu /= static_cast<double>(n);
        Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
        for (Eigen::Index i = 0; i < n; ++i) {
            const Eigen::VectorXd c = s.row(i).transpose() - mu;
            cov += c * c.transpose();
        }
        cov /= static_cast<double>(n - 1);
        cov += 1e-6 * Eigen::MatrixXd::Identity(d, d);
        return std::make_pair(mu, cov);
    };
    const auto [mu1, c1] = moments(a);
    const auto [mu2, c2] = moments(b);

    Eigen::EigenSolver<Eigen::MatrixXd> eig(c1 * c2);
    double tr_sqrt = 0.0;
    for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
        const double lam = eig.eigenvalues()[i].real();
        if (lam > 0.0) tr_sqrt += std::sqrt(lam);
    }
    return (mu1 - mu2).squaredNorm() + c1.trace() + c2.trace() - 2.0 * tr_sqrt;
}

RefNoRef no_reference(const sdp::HyperCube& fused, const sdp::HyperCube& lr,
                      const sdp::HyperCube& msi, const Eigen::MatrixXd& psf, int factor) {
    RefNoRef out;
    const int nb = fused.bands, mb = msi.bands;

    if (nb > 1) {
        double acc = 0.0;
        for (int i = 0; i < nb; ++i)
            for (int j = 0; j < nb; ++j)
                if (i != j)
                    acc += std::abs(q_mean(fused, i, fused, j, 32) - q_mean(lr, i, lr, j, 32));
        out.d_lambda = acc / (static_cast<double>(nb) * (nb - 1));
    }

    // Degrade the MSI by direct circular convolution + decimation.
    const int k = static_cast<int>(psf.rows());
    const int cc = k / 2;
    sdp::HyperCube msi_lr(mb, lr.height, lr.width);
    for (int m = 0; m < mb; ++m)
        for (int r = 0; r < lr.height; ++r)
            for (int c = 0; c < lr.width; ++c) {
                double acc = 0.0;
                for (int u = 0; u < k; ++u)
                    for (int v = 0; v < k; ++v) {
                        const int sr =
                            ((r * factor - (u - cc)) % msi.height + msi.height) % msi.height;
                        const int sc =
                            ((c * factor - (v - cc)) % msi.width + msi.width) % msi.width;
                        acc += psf(u, v) * msi.at(m, sr, sc);
                    }
                msi_lr.at(m, r, c) = acc;
            }

    double acc = 0.0;
    for (int l = 0; l < nb; ++l)
        for (int m = 0; m < mb; ++m)
            acc += std::abs(q_mean(fused, l, msi, m, 32) - q_mean(lr, l, msi_lr, m, 32));
    out.d_s = acc / (static_cast<double>(nb) * mb);

    out.qnr = (1.0 - out.d_lambda) * (1.0 - out.d_s);
    return out;
}

double ScalarAdam::step(double param, double grad, double lr, double b1, double b2, double eps) {
    ++t;
    m = b1 * m + (1.0 - b1) * grad;
    v = b2 * v + (1.0 - b2) * grad * grad;
    const double mhat = m / (1.0 - std::pow(b1, static_cast<double>(t)));
    const double vhat = v / (1.0 - std::pow(b2, static_cast<double>(t)));
    return param - lr * mhat / (std::sqrt(vhat) + eps);
}

double ddpm_posterior_mean_ref(double x_t, double x0, double beta_t, double abar_t,
                               double abar_prev) {
    const double alpha_t = 1.0 - beta_t;
    const double c0 = std::sqrt(abar_prev) * beta_t / (1.0 - abar_t);
    const double ct = std::sqrt(alpha_t) * (1.0 - abar_prev) / (1.0 - abar_t);
    return c0 * x0 + ct * x_t;
}

double central_diff(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

double relative_error(double got, double want) {
    const double denom = std::max(std::abs(got), std::abs(want));
    if (denom == 0.0) return 0.0;
    return std::abs(got - want) / denom;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    auto ranks = [n](const std::vector<double>& v) {
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&v](std::size_t i, std::size_t j) {
            return v[i] < v[j];
        });
        std::vector<double> rank(n);
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
            const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
            for (std::size_t k = i; k <= j; ++k) rank[idx[k]] = avg;
            i = j + 1;
        }
        return rank;
    };
    const std::vector<double> ra = ranks(a), rb = ranks(b);
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += ra[i];
        mb += rb[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double num = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += (ra[i] - ma) * (rb[i] - mb);
        va += (ra[i] - ma) * (ra[i] - ma);
        vb += (rb[i] - mb) * (rb[i] - mb);
    }
    return num / std::sqrt(va * vb);
}

} // namespace oracle
