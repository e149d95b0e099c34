#include "dirac/polyroots.hpp"

#include <algorithm>
#include <limits>

#include <Eigen/Eigenvalues>

namespace dirac {

std::vector<cplx> poly_roots(std::vector<cplx> c) {
    while (!c.empty() && std::abs(c.back()) == 0.0) c.pop_back();
    if (c.size() < 2) return {};
    const int n = int(c.size()) - 1;
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -c[i] / c[n];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    std::vector<cplx> roots(es.eigenvalues().data(), es.eigenvalues().data() + n);
    std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return roots;
}

std::vector<std::pair<cplx, int>> cluster_roots(std::vector<cplx> roots, double tol) {
    std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    std::vector<std::pair<cplx, int>> out;
    std::vector<bool> used(roots.size(), false);
    for (size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        cplx sum = roots[i];
        int count = 1;
        used[i] = true;
        for (size_t j = i + 1; j < roots.size(); ++j) {
            if (used[j]) continue;
            if (std::abs(roots[j] - sum / double(count)) <= tol) {
                sum += roots[j];
                ++count;
                used[j] = true;
            }
        }
        out.emplace_back(sum / double(count), count);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.first.real() != b.first.real() ? a.first.real() < b.first.real()
                                                : a.first.imag() < b.first.imag();
    });
    return out;
}

double min_root_gap(const std::vector<cplx>& roots) {
    double gap = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < roots.size(); ++i)
        for (size_t j = i + 1; j < roots.size(); ++j)
            gap = std::min(gap, std::abs(roots[i] - roots[j]));
    return gap;
}

}  // namespace dirac
