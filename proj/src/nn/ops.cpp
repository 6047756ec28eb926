#include "raman/nn/ops.hpp"

#include <cmath>

#include "raman/errors.hpp"

namespace raman::nn {

namespace detail {
Tensor make_op(std::vector<int> shape, std::vector<double> values,
               std::vector<Tensor> inputs, std::function<void(Node&)> backward_fn);
}

namespace {

inline int ceil_div(int a, int b) { return a > 0 ? (a + b - 1) / b : a / b; }

void require(bool cond, const char* msg) {
    if (!cond) throw ShapeError(msg);
}

}  // namespace

Tensor conv1d(const Tensor& x, const Tensor& w, const Tensor& b, int stride, int pad) {
    require(x.ndim() == 3 && w.ndim() == 3 && b.ndim() == 1, "conv1d: bad ranks");
    const int n = x.dim(0), ci = x.dim(1), len = x.dim(2);
    const int co = w.dim(0), k = w.dim(2);
    require(w.dim(1) == ci && b.dim(0) == co, "conv1d: channel mismatch");
    const int lo = (len + 2 * pad - k) / stride + 1;
    require(len + 2 * pad >= k && lo >= 1, "conv1d: kernel larger than padded input");

    std::vector<double> out(static_cast<size_t>(n) * co * lo);
    const double* xv = x.values().data();
    const double* wv = w.values().data();
    const double* bv = b.values().data();
    for (int in = 0; in < n; ++in) {
        for (int oc = 0; oc < co; ++oc) {
            double* orow = out.data() + (static_cast<size_t>(in) * co + oc) * lo;
            for (int i = 0; i < lo; ++i) orow[i] = bv[oc];
            for (int icc = 0; icc < ci; ++icc) {
                const double* xrow = xv + (static_cast<size_t>(in) * ci + icc) * len;
                const double* wrow = wv + (static_cast<size_t>(oc) * ci + icc) * k;
                for (int kk = 0; kk < k; ++kk) {
                    const double wk = wrow[kk];
                    if (wk == 0.0) continue;
                    const int start = std::max(0, ceil_div(pad - kk, stride));
                    const int stop = std::min(lo - 1, (len - 1 + pad - kk) / stride);
                    const double* src = xrow + start * stride + kk - pad;
                    if (stride == 1) {
                        for (int i = start; i <= stop; ++i) orow[i] += wk * src[i - start];
                    } else {
                        for (int i = start; i <= stop; ++i) {
                            orow[i] += wk * src[static_cast<size_t>(i - start) * stride];
                        }
                    }
                }
            }
        }
    }

    auto xn = x.node();
    auto wn = w.node();
    auto bn = b.node();
    return detail::make_op(
        {n, co, lo}, std::move(out), {x, w, b},
        [xn, wn, bn, n, ci, len, co, k, lo, stride, pad](detail::Node& node) {
            const double* gy = node.g.data();
            if (xn->requires_grad) xn->ensure_grad();
            if (wn->requires_grad) wn->ensure_grad();
            if (bn->requires_grad) bn->ensure_grad();
            for (int in = 0; in < n; ++in) {
                for (int oc = 0; oc < co; ++oc) {
                    const double* grow = gy + (static_cast<size_t>(in) * co + oc) * lo;
                    if (bn->requires_grad) {
                        double acc = 0.0;
                        for (int i = 0; i < lo; ++i) acc += grow[i];
                        bn->g[oc] += acc;
                    }
                    for (int icc = 0; icc < ci; ++icc) {
                        const double* xrow =
                            xn->v.data() + (static_cast<size_t>(in) * ci + icc) * len;
                        double* gxrow =
                            xn->requires_grad
                                ? xn->g.data() + (static_cast<size_t>(in) * ci + icc) * len
                                : nullptr;
                        const double* wrow =
                            wn->v.data() + (static_cast<size_t>(oc) * ci + icc) * k;
                        double* gwrow =
                            wn->requires_grad
                                ? wn->g.data() + (static_cast<size_t>(oc) * ci + icc) * k
                                : nullptr;
                        for (int kk = 0; kk < k; ++kk) {
                            const int start = std::max(0, ceil_div(pad - kk, stride));
                            const int stop = std::min(lo - 1, (len - 1 + pad - kk) / stride);
                            const int off = start * stride + kk - pad;
                            if (gwrow) {
                                double acc = 0.0;
                                const double* src = xrow + off;
                                for (int i = start; i <= stop; ++i) {
                                    acc += grow[i] * src[static_cast<size_t>(i - start) * stride];
                                }
                                gwrow[kk] += acc;
                            }
                            if (gxrow) {
                                const double wk = wrow[kk];
                                double* dst = gxrow + off;
                                for (int i = start; i <= stop; ++i) {
                                    dst[static_cast<size_t>(i - start) * stride] += wk * grow[i];
                                }
                            }
                        }
                    }
                }
            }
        });
}

Tensor conv_transpose1d(const Tensor& x, const Tensor& w, const Tensor& b, int stride) {
    require(x.ndim() == 3 && w.ndim() == 3 && b.ndim() == 1, "conv_transpose1d: bad ranks");
    const int n = x.dim(0), ci = x.dim(1), len = x.dim(2);
    const int co = w.dim(1), k = w.dim(2);
    require(w.dim(0) == ci && b.dim(0) == co, "conv_transpose1d: channel mismatch");
    const int lo = (len - 1) * stride + k;

    std::vector<double> out(static_cast<size_t>(n) * co * lo);
    const double* xv = x.values().data();
    const double* wv = w.values().data();
    const double* bv = b.values().data();
    for (int in = 0; in < n; ++in) {
        for (int oc = 0; oc < co; ++oc) {
            double* orow = out.data() + (static_cast<size_t>(in) * co + oc) * lo;
            for (int i = 0; i < lo; ++i) orow[i] = bv[oc];
            for (int icc = 0; icc < ci; ++icc) {
                const double* xrow = xv + (static_cast<size_t>(in) * ci + icc) * len;
                const double* wrow = wv + (static_cast<size_t>(icc) * co + oc) * k;
                for (int kk = 0; kk < k; ++kk) {
                    const double wk = wrow[kk];
                    if (wk == 0.0) continue;
                    double* dst = orow + kk;
                    for (int i = 0; i < len; ++i) {
                        dst[static_cast<size_t>(i) * stride] += wk * xrow[i];
                    }
                }
            }
        }
    }

    auto xn = x.node();
    auto wn = w.node();
    auto bn = b.node();
    return detail::make_op(
        {n, co, lo}, std::move(out), {x, w, b},
        [xn, wn, bn, n, ci, len, co, k, lo, stride](detail::Node& node) {
            const double* gy = node.g.data();
            if (xn->requires_grad) xn->ensure_grad();
            if (wn->requires_grad) wn->ensure_grad();
            if (bn->requires_grad) bn->ensure_grad();
            for (int in = 0; in < n; ++in) {
                for (int oc = 0; oc < co; ++oc) {
                    const double* grow = gy + (static_cast<size_t>(in) * co + oc) * lo;
                    if (bn->requires_grad) {
                        double acc = 0.0;
                        for (int i = 0; i < lo; ++i) acc += grow[i];
                        bn->g[oc] += acc;
                    }
                    for (int icc = 0; icc < ci; ++icc) {
                        const double* xrow =
                            xn->v.data() + (static_cast<size_t>(in) * ci + icc) * len;
                        double* gxrow =
                            xn->requires_grad
                                ? xn->g.data() + (static_cast<size_t>(in) * ci + icc) * len
                                : nullptr;
                        const double* wrow =
                            wn->v.data() + (static_cast<size_t>(icc) * co + oc) * k;
                        double* gwrow =
                            wn->requires_grad
                                ? wn->g.data() + (static_cast<size_t>(icc) * co + oc) * k
                                : nullptr;
                        for (int kk = 0; kk < k; ++kk) {
                            const double* gdst = grow + kk;
                            if (gwrow) {
                                double acc = 0.0;
                                for (int i = 0; i < len; ++i) {
                                    acc += xrow[i] * gdst[static_cast<size_t>(i) * stride];
                                }
                                gwrow[kk] += acc;
                            }
                            if (gxrow) {
                                const double wk = wrow[kk];
                                for (int i = 0; i < len; ++i) {
                                    gxrow[i] += wk * gdst[static_cast<size_t>(i) * stride];
                                }
                            }
                        }
                    }
                }
            }
        });
}

Tensor conv2d(const Tensor& x, const Tensor& w, const Tensor& b, int stride, int pad) {
    require(x.ndim() == 4 && w.ndim() == 4 && b.ndim() == 1, "conv2d: bad ranks");
    const int n = x.dim(0), ci = x.dim(1), h = x.dim(2), wd = x.dim(3);
    const int co = w.dim(0), kh = w.dim(2), kw = w.dim(3);
    require(w.dim(1) == ci && b.dim(0) == co, "conv2d: channel mismatch");
    const int ho = (h + 2 * pad - kh) / stride + 1;
    const int wo = (wd + 2 * pad - kw) / stride + 1;
    require(h + 2 * pad >= kh && wd + 2 * pad >= kw && ho >= 1 && wo >= 1,
            "conv2d: kernel larger than padded input");

    std::vector<double> out(static_cast<size_t>(n) * co * ho * wo);
    const double* xv = x.values().data();
    const double* wv = w.values().data();
    const double* bv = b.values().data();
    for (int in = 0; in < n; ++in) {
        for (int oc = 0; oc < co; ++oc) {
            double* oplane = out.data() + (static_cast<size_t>(in) * co + oc) * ho * wo;
            for (int i = 0; i < ho * wo; ++i) oplane[i] = bv[oc];
            for (int icc = 0; icc < ci; ++icc) {
                const double* xplane = xv + (static_cast<size_t>(in) * ci + icc) * h * wd;
                const double* wk =
                    wv + (static_cast<size_t>(oc) * ci + icc) * kh * kw;
                for (int ky = 0; ky < kh; ++ky) {
                    for (int kx = 0; kx < kw; ++kx) {
                        const double wkk = wk[ky * kw + kx];
                        if (wkk == 0.0) continue;
                        const int y0 = std::max(0, ceil_div(pad - ky, stride));
                        const int y1 = std::min(ho - 1, (h - 1 + pad - ky) / stride);
                        const int x0 = std::max(0, ceil_div(pad - kx, stride));
                        const int x1 = std::min(wo - 1, (wd - 1 + pad - kx) / stride);
                        for (int oy = y0; oy <= y1; ++oy) {
                            const double* srow =
                                xplane + (static_cast<size_t>(oy) * stride + ky - pad) * wd +
                                x0 * stride + kx - pad;
                            double* drow = oplane + static_cast<size_t>(oy) * wo;
                            if (stride == 1) {
                                for (int ox = x0; ox <= x1; ++ox) {
                                    drow[ox] += wkk * srow[ox - x0];
                                }
                            } else {
                                for (int ox = x0; ox <= x1; ++ox) {
                                    drow[ox] += wkk * srow[static_cast<size_t>(ox - x0) * stride];
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    auto xn = x.node();
    auto wn = w.node();
    auto bn = b.node();
    return detail::make_op(
        {n, co, ho, wo}, std::move(out), {x, w, b},
        [xn, wn, bn, n, ci, h, wd, co, kh, kw, ho, wo, stride,
         pad](detail::Node& node) {
            const double* gy = node.g.data();
            if (xn->requires_grad) xn->ensure_grad();
            if (wn->requires_grad) wn->ensure_grad();
            if (bn->requires_grad) bn->ensure_grad();
            for (int in = 0; in < n; ++in) {
                for (int oc = 0; oc < co; ++oc) {
                    const double* gplane =
                        gy + (static_cast<size_t>(in) * co + oc) * ho * wo;
                    if (bn->requires_grad) {
                        double acc = 0.0;
                        for (int i = 0; i < ho * wo; ++i) acc += gplane[i];
                        bn->g[oc] += acc;
                    }
                    for (int icc = 0; icc < ci; ++icc) {
                        const double* xplane =
                            xn->v.data() + (static_cast<size_t>(in) * ci + icc) * h * wd;
                        double* gxplane =
                            xn->requires_grad
                                ? xn->g.data() + (static_cast<size_t>(in) * ci + icc) * h * wd
                                : nullptr;
                        const double* wk =
                            wn->v.data() + (static_cast<size_t>(oc) * ci + icc) * kh * kw;
                        double* gwk =
                            wn->requires_grad
                                ? wn->g.data() + (static_cast<size_t>(oc) * ci + icc) * kh * kw
                                : nullptr;
                        for (int ky = 0; ky < kh; ++ky) {
                            for (int kx = 0; kx < kw; ++kx) {
                                const int y0 = std::max(0, ceil_div(pad - ky, stride));
                                const int y1 = std::min(ho - 1, (h - 1 + pad - ky) / stride);
                                const int x0 = std::max(0, ceil_div(pad - kx, stride));
                                const int x1 = std::min(wo - 1, (wd - 1 + pad - kx) / stride);
                                double acc = 0.0;
                                const double wkk = wk[ky * kw + kx];
                                for (int oy = y0; oy <= y1; ++oy) {
                                    const size_t src_off =
                                        (static_cast<size_t>(oy) * stride + ky - pad) * wd +
                                        x0 * stride + kx - pad;
                                    const double* grow =
                                        gplane + static_cast<size_t>(oy) * wo;
                                    if (gwk) {
                                        const double* srow = xplane + src_off;
                                        for (int ox = x0; ox <= x1; ++ox) {
                                            acc += grow[ox] *
                                                   srow[static_cast<size_t>(ox - x0) * stride];
                                        }
                                    }
                                    if (gxplane) {
                                        double* drow = gxplane + src_off;
                                        for (int ox = x0; ox <= x1; ++ox) {
                                            drow[static_cast<size_t>(ox - x0) * stride] +=
                                                wkk * grow[ox];
                                        }
                                    }
                                }
                                if (gwk) gwk[ky * kw + kx] += acc;
                            }
                        }
                    }
                }
            }
        });
}

Tensor batchnorm1d(const Tensor& x, const Tensor& gamma, const Tensor& beta,
                   RunningStats& stats, bool training) {
    require(x.ndim() == 3, "batchnorm1d: expected (N, C, L)");
    const int n = x.dim(0), c = x.dim(1), len = x.dim(2);
    require(gamma.ndim() == 1 && gamma.dim(0) == c && beta.ndim() == 1 && beta.dim(0) == c,
            "batchnorm1d: parameter shape mismatch");
    if (static_cast<int>(stats.mean.size()) != c) {
        stats.mean.assign(c, 0.0);
        stats.var.assign(c, 1.0);
    }
    const double eps = stats.eps;
    const int64_t m = static_cast<int64_t>(n) * len;
    const double* xv = x.values().data();

    std::vector<double> mean(c), inv_std(c);
    if (training) {
        for (int ch = 0; ch < c; ++ch) {
            double acc = 0.0;
            for (int in = 0; in < n; ++in) {
                const double* row = xv + (static_cast<size_t>(in) * c + ch) * len;
                for (int i = 0; i < len; ++i) acc += row[i];
            }
            mean[ch] = acc / static_cast<double>(m);
            double var = 0.0;
            for (int in = 0; in < n; ++in) {
                const double* row = xv + (static_cast<size_t>(in) * c + ch) * len;
                for (int i = 0; i < len; ++i) {
                    const double d = row[i] - mean[ch];
                    var += d * d;
                }
            }
            var /= static_cast<double>(m);
            inv_std[ch] = 1.0 / std::sqrt(var + eps);
            const double unbiased = m > 1 ? var * static_cast<double>(m) / (m - 1) : var;
            stats.mean[ch] = (1.0 - stats.momentum) * stats.mean[ch] + stats.momentum * mean[ch];
            stats.var[ch] = (1.0 - stats.momentum) * stats.var[ch] + stats.momentum * unbiased;
        }
    } else {
        for (int ch = 0; ch < c; ++ch) {
            mean[ch] = stats.mean[ch];
            inv_std[ch] = 1.0 / std::sqrt(stats.var[ch] + eps);
        }
    }

    std::vector<double> out(x.size());
    const double* gv = gamma.values().data();
    const double* bv = beta.values().data();
    for (int in = 0; in < n; ++in) {
        for (int ch = 0; ch < c; ++ch) {
            const double* row = xv + (static_cast<size_t>(in) * c + ch) * len;
            double* orow = out.data() + (static_cast<size_t>(in) * c + ch) * len;
            const double g = gv[ch] * inv_std[ch];
            const double off = bv[ch] - mean[ch] * g;
            for (int i = 0; i < len; ++i) orow[i] = row[i] * g + off;
        }
    }

    auto xn = x.node();
    auto gn = gamma.node();
    auto bn = beta.node();
    return detail::make_op(
        {n, c, len}, std::move(out), {x, gamma, beta},
        [xn, gn, bn, n, c, len, m, mean, inv_std, training](detail::Node& node) {
            const double* gy = node.g.data();
            if (xn->requires_grad) xn->ensure_grad();
            if (gn->requires_grad) gn->ensure_grad();
            if (bn->requires_grad) bn->ensure_grad();
            for (int ch = 0; ch < c; ++ch) {
                double sum_gy = 0.0, sum_gy_xhat = 0.0;
                for (int in = 0; in < n; ++in) {
                    const double* grow = gy + (static_cast<size_t>(in) * c + ch) * len;
                    const double* xrow = xn->v.data() + (static_cast<size_t>(in) * c + ch) * len;
                    for (int i = 0; i < len; ++i) {
                        sum_gy += grow[i];
                        sum_gy_xhat += grow[i] * (xrow[i] - mean[ch]) * inv_std[ch];
                    }
                }
                if (bn->requires_grad) bn->g[ch] += sum_gy;
                if (gn->requires_grad) gn->g[ch] += sum_gy_xhat;
                if (xn->requires_grad) {
                    const double gval = gn->v[ch] * inv_std[ch];
                    for (int in = 0; in < n; ++in) {
                        double* gxrow =
                            xn->g.data() + (static_cast<size_t>(in) * c + ch) * len;
                        const double* grow = gy + (static_cast<size_t>(in) * c + ch) * len;
                        const double* xrow =
                            xn->v.data() + (static_cast<size_t>(in) * c + ch) * len;
                        if (training) {
                            const double inv_m = 1.0 / static_cast<double>(m);
                            for (int i = 0; i < len; ++i) {
                                const double xhat = (xrow[i] - mean[ch]) * inv_std[ch];
                                gxrow[i] += gval * (grow[i] - inv_m * sum_gy -
                                                    inv_m * xhat * sum_gy_xhat);
                            }
                        } else {
                            for (int i = 0; i < len; ++i) gxrow[i] += gval * grow[i];
                        }
                    }
                }
            }
        });
}

Tensor linear(const Tensor& x, const Tensor& w, const Tensor& b) {
    require(x.ndim() == 2 && w.ndim() == 2 && b.ndim() == 1, "linear: bad ranks");
    const int n = x.dim(0), f = x.dim(1), o = w.dim(0);
    require(w.dim(1) == f && b.dim(0) == o, "linear: feature mismatch");
    std::vector<double> out(static_cast<size_t>(n) * o);
    const double* xv = x.values().data();
    const double* wv = w.values().data();
    const double* bv = b.values().data();
    for (int in = 0; in < n; ++in) {
        for (int io = 0; io < o; ++io) {
            const double* xrow = xv + static_cast<size_t>(in) * f;
            const double* wrow = wv + static_cast<size_t>(io) * f;
            double acc = bv[io];
            for (int j = 0; j < f; ++j) acc += xrow[j] * wrow[j];
            out[static_cast<size_t>(in) * o + io] = acc;
        }
    }
    auto xn = x.node();
    auto wn = w.node();
    auto bn = b.node();
    return detail::make_op({n, o}, std::move(out), {x, w, b},
                           [xn, wn, bn, n, f, o](detail::Node& node) {
                               const double* gy = node.g.data();
                               if (xn->requires_grad) xn->ensure_grad();
                               if (wn->requires_grad) wn->ensure_grad();
                               if (bn->requires_grad) bn->ensure_grad();
                               for (int in = 0; in < n; ++in) {
                                   const double* grow = gy + static_cast<size_t>(in) * o;
                                   const double* xrow = xn->v.data() + static_cast<size_t>(in) * f;
                                   for (int io = 0; io < o; ++io) {
                                       const double g = grow[io];
                                       if (bn->requires_grad) bn->g[io] += g;
                                       const double* wrow = wn->v.data() + static_cast<size_t>(io) * f;
                                       if (wn->requires_grad) {
                                           double* gwrow = wn->g.data() + static_cast<size_t>(io) * f;
                                           for (int j = 0; j < f; ++j) gwrow[j] += g * xrow[j];
                                       }
                                       if (xn->requires_grad) {
                                           double* gxrow = xn->g.data() + static_cast<size_t>(in) * f;
                                           for (int j = 0; j < f; ++j) gxrow[j] += g * wrow[j];
                                       }
                                   }
                               }
                           });
}

Tensor global_avg_pool2d(const Tensor& x) {
    require(x.ndim() == 4, "global_avg_pool2d: expected (N, C, H, W)");
    const int n = x.dim(0), c = x.dim(1);
    const int64_t hw = static_cast<int64_t>(x.dim(2)) * x.dim(3);
    std::vector<double> out(static_cast<size_t>(n) * c);
    const double* xv = x.values().data();
    for (int i = 0; i < n * c; ++i) {
        const double* plane = xv + static_cast<size_t>(i) * hw;
        double acc = 0.0;
        for (int64_t j = 0; j < hw; ++j) acc += plane[j];
        out[i] = acc / static_cast<double>(hw);
    }
    auto xn = x.node();
    return detail::make_op({n, c}, std::move(out), {x}, [xn, n, c, hw](detail::Node& node) {
        xn->ensure_grad();
        for (int i = 0; i < n * c; ++i) {
            const double g = node.g[i] / static_cast<double>(hw);
            double* plane = xn->g.data() + static_cast<size_t>(i) * hw;
            for (int64_t j = 0; j < hw; ++j) plane[j] += g;
        }
    });
}

Tensor channel_scale(const Tensor& x, const Tensor& gate) {
    require(x.ndim() == 4 && gate.ndim() == 2, "channel_scale: bad ranks");
    const int n = x.dim(0), c = x.dim(1);
    require(gate.dim(0) == n && gate.dim(1) == c, "channel_scale: gate shape mismatch");
    const int64_t hw = static_cast<int64_t>(x.dim(2)) * x.dim(3);
    std::vector<double> out(x.size());
    const double* xv = x.values().data();
    const double* gv = gate.values().data();
    for (int i = 0; i < n * c; ++i) {
        const double g = gv[i];
        const double* src = xv + static_cast<size_t>(i) * hw;
        double* dst = out.data() + static_cast<size_t>(i) * hw;
        for (int64_t j = 0; j < hw; ++j) dst[j] = src[j] * g;
    }
    auto xn = x.node();
    auto gn = gate.node();
    return detail::make_op(x.shape(), std::move(out), {x, gate},
                           [xn, gn, n, c, hw](detail::Node& node) {
                               if (xn->requires_grad) xn->ensure_grad();
                               if (gn->requires_grad) gn->ensure_grad();
                               for (int i = 0; i < n * c; ++i) {
                                   const double* gy = node.g.data() + static_cast<size_t>(i) * hw;
                                   const double* src = xn->v.data() + static_cast<size_t>(i) * hw;
                                   if (xn->requires_grad) {
                                       const double g = gn->v[i];
                                       double* dst = xn->g.data() + static_cast<size_t>(i) * hw;
                                       for (int64_t j = 0; j < hw; ++j) dst[j] += gy[j] * g;
                                   }
                                   if (gn->requires_grad) {
                                       double acc = 0.0;
                                       for (int64_t j = 0; j < hw; ++j) acc += gy[j] * src[j];
                                       gn->g[i] += acc;
                                   }
                               }
                           });
}

namespace {

// Shared shuffle/unshuffle index walk: calls fn(out_index, in_index).
template <typename Fn>
void shuffle_map(int n, int c_out, int s, int h, int w, Fn fn) {
    const int c_in = c_out * s * s;
    const int ho = h * s, wo = w * s;
    for (int in = 0; in < n; ++in) {
        for (int oc = 0; oc < c_out; ++oc) {
            for (int dy = 0; dy < s; ++dy) {
                for (int dx = 0; dx < s; ++dx) {
                    const int ic = oc * s * s + dy * s + dx;
                    for (int y = 0; y < h; ++y) {
                        const size_t in_row =
                            ((static_cast<size_t>(in) * c_in + ic) * h + y) * w;
                        const size_t out_row =
                            ((static_cast<size_t>(in) * c_out + oc) * ho + y * s + dy) * wo +
                            dx;
                        for (int x = 0; x < w; ++x) {
                            fn(out_row + static_cast<size_t>(x) * s, in_row + x);
                        }
                    }
                }
            }
        }
    }
}

}  // namespace

Tensor pixel_shuffle(const Tensor& x, int s) {
    require(x.ndim() == 4, "pixel_shuffle: expected (N, C, H, W)");
    const int n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
    require(c % (s * s) == 0, "pixel_shuffle: channels not divisible by s*s");
    const int co = c / (s * s);
    std::vector<double> out(x.size());
    const double* xv = x.values().data();
    shuffle_map(n, co, s, h, w, [&](size_t oi, size_t ii) { out[oi] = xv[ii]; });
    auto xn = x.node();
    return detail::make_op({n, co, h * s, w * s}, std::move(out), {x},
                           [xn, n, co, s, h, w](detail::Node& node) {
                               xn->ensure_grad();
                               shuffle_map(n, co, s, h, w, [&](size_t oi, size_t ii) {
                                   xn->g[ii] += node.g[oi];
                               });
                           });
}

Tensor pixel_unshuffle(const Tensor& x, int s) {
    require(x.ndim() == 4, "pixel_unshuffle: expected (N, C, H, W)");
    const int n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
    require(h % s == 0 && w % s == 0, "pixel_unshuffle: dims not divisible by s");
    const int ho = h / s, wo = w / s;
    std::vector<double> out(x.size());
    const double* xv = x.values().data();
    shuffle_map(n, c, s, ho, wo, [&](size_t oi, size_t ii) { out[ii] = xv[oi]; });
    auto xn = x.node();
    return detail::make_op({n, c * s * s, ho, wo}, std::move(out), {x},
                           [xn, n, c, s, ho, wo](detail::Node& node) {
                               xn->ensure_grad();
                               shuffle_map(n, c, s, ho, wo, [&](size_t oi, size_t ii) {
                                   xn->g[oi] += node.g[ii];
                               });
                           });
}

Tensor concat_channels(const Tensor& a, const Tensor& b) {
    require(a.ndim() == b.ndim() && a.ndim() >= 3, "concat_channels: bad ranks");
    require(a.dim(0) == b.dim(0), "concat_channels: batch mismatch");
    int64_t inner_a = 1, inner_b = 1;
    for (int i = 2; i < a.ndim(); ++i) {
        inner_a *= a.dim(i);
        inner_b *= b.dim(i);
        require(a.dim(i) == b.dim(i), "concat_channels: inner dims mismatch");
    }
    const int n = a.dim(0), ca = a.dim(1), cb = b.dim(1);
    const int64_t inner = inner_a;
    std::vector<int> shape = a.shape();
    shape[1] = ca + cb;
    std::vector<double> out(static_cast<size_t>(n) * (ca + cb) * inner);
    for (int in = 0; in < n; ++in) {
        const double* src_a = a.values().data() + static_cast<size_t>(in) * ca * inner;
        const double* src_b = b.values().data() + static_cast<size_t>(in) * cb * inner;
        double* dst = out.data() + static_cast<size_t>(in) * (ca + cb) * inner;
        std::copy(src_a, src_a + ca * inner, dst);
        std::copy(src_b, src_b + cb * inner, dst + ca * inner);
    }
    auto an = a.node();
    auto bn = b.node();
    return detail::make_op(std::move(shape), std::move(out), {a, b},
                           [an, bn, n, ca, cb, inner](detail::Node& node) {
                               if (an->requires_grad) an->ensure_grad();
                               if (bn->requires_grad) bn->ensure_grad();
                               for (int in = 0; in < n; ++in) {
                                   const double* g =
                                       node.g.data() + static_cast<size_t>(in) * (ca + cb) * inner;
                                   if (an->requires_grad) {
                                       double* dst = an->g.data() + static_cast<size_t>(in) * ca * inner;
                                       for (int64_t i = 0; i < ca * inner; ++i) dst[i] += g[i];
                                   }
                                   if (bn->requires_grad) {
                                       double* dst = bn->g.data() + static_cast<size_t>(in) * cb * inner;
                                       const double* gsrc = g + ca * inner;
                                       for (int64_t i = 0; i < cb * inner; ++i) dst[i] += gsrc[i];
                                   }
                               }
                           });
}

Tensor pad1d(const Tensor& x, int left, int right) {
    require(x.ndim() == 3, "pad1d: expected (N, C, L)");
    require(left >= 0 && right >= 0, "pad1d: negative padding");
    const int n = x.dim(0), c = x.dim(1), len = x.dim(2);
    const int lo = len + left + right;
    std::vector<double> out(static_cast<size_t>(n) * c * lo, 0.0);
    for (int i = 0; i < n * c; ++i) {
        const double* src = x.values().data() + static_cast<size_t>(i) * len;
        double* dst = out.data() + static_cast<size_t>(i) * lo + left;
        std::copy(src, src + len, dst);
    }
    auto xn = x.node();
    return detail::make_op({n, c, lo}, std::move(out), {x},
                           [xn, n, c, len, lo, left](detail::Node& node) {
                               xn->ensure_grad();
                               for (int i = 0; i < n * c; ++i) {
                                   const double* g =
                                       node.g.data() + static_cast<size_t>(i) * lo + left;
                                   double* dst = xn->g.data() + static_cast<size_t>(i) * len;
                                   for (int j = 0; j < len; ++j) dst[j] += g[j];
                               }
                           });
}

Tensor crop1d(const Tensor& x, int start, int length) {
    require(x.ndim() == 3, "crop1d: expected (N, C, L)");
    const int n = x.dim(0), c = x.dim(1), len = x.dim(2);
    require(start >= 0 && length >= 1 && start + length <= len, "crop1d: bad window");
    std::vector<double> out(static_cast<size_t>(n) * c * length);
    for (int i = 0; i < n * c; ++i) {
        const double* src = x.values().data() + static_cast<size_t>(i) * len + start;
        std::copy(src, src + length, out.data() + static_cast<size_t>(i) * length);
    }
    auto xn = x.node();
    return detail::make_op({n, c, length}, std::move(out), {x},
                           [xn, n, c, len, start, length](detail::Node& node) {
                               xn->ensure_grad();
                               for (int i = 0; i < n * c; ++i) {
                                   const double* g =
                                       node.g.data() + static_cast<size_t>(i) * length;
                                   double* dst =
                                       xn->g.data() + static_cast<size_t>(i) * len + start;
                                   for (int j = 0; j < length; ++j) dst[j] += g[j];
                               }
                           });
}

}  // namespace raman::nn
