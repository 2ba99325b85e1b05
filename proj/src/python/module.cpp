#include "pat/angconv.hpp"
#include "pat/fbp.hpp"
#include "pat/grid.hpp"
#include "pat/nn.hpp"
#include "pat/noise.hpp"
#include "pat/otstop.hpp"
#include "pat/pipeline.hpp"
#include "pat/polar.hpp"
#include "pat/wavesim.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace pat;

namespace {

using Arr = py::array_t<double, py::array::c_style | py::array::forcecast>;

CartesianImage image_from(const Arr& a) {
    const auto buf = a.request();
    if (buf.ndim != 2 || buf.shape[0] != buf.shape[1])
        throw std::invalid_argument("expected a square 2-D array");
    CartesianImage img(static_cast<int>(buf.shape[0]));
    std::copy_n(static_cast<const double*>(buf.ptr), img.v.size(), img.v.begin());
    return img;
}

PolarImage polar_from(const Arr& a) {
    const auto buf = a.request();
    if (buf.ndim != 2) throw std::invalid_argument("expected a 2-D array");
    PolarImage p(static_cast<int>(buf.shape[0]), static_cast<int>(buf.shape[1]));
    std::copy_n(static_cast<const double*>(buf.ptr), p.v.size(), p.v.begin());
    return p;
}

Sinogram sino_from(const Arr& a) {
    const auto buf = a.request();
    if (buf.ndim != 2) throw std::invalid_argument("expected a 2-D array");
    Sinogram s(static_cast<int>(buf.shape[0]), static_cast<int>(buf.shape[1]));
    std::copy_n(static_cast<const double*>(buf.ptr), s.v.size(), s.v.begin());
    return s;
}

py::array_t<double> to_numpy(const std::vector<double>& v, ssize_t rows, ssize_t cols) {
    py::array_t<double> out({rows, cols});
    std::copy(v.begin(), v.end(), static_cast<double*>(out.request().ptr));
    return out;
}

AngularKernel kernel_arg(const std::string& name, int n_phi) { return make_kernel(name, n_phi); }

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Photoacoustic reconstruction core: spectral wave solver, finite-time "
              "filtered backprojection, polar resampling, angular deconvolution.";

    py::class_<GridSpec>(m, "GridSpec")
        .def_readonly("M", &GridSpec::M)
        .def_readonly("n_r", &GridSpec::n_r)
        .def_readonly("n_phi", &GridSpec::n_phi)
        .def_readonly("n_det", &GridSpec::n_det)
        .def_readonly("n_t", &GridSpec::n_t)
        .def_readonly("T", &GridSpec::T)
        .def("__repr__", [](const GridSpec& g) {
            return "GridSpec(M=" + std::to_string(g.M) + ", n_r=" + std::to_string(g.n_r) +
                   ", n_phi=" + std::to_string(g.n_phi) + ", n_det=" + std::to_string(g.n_det) +
                   ", n_t=" + std::to_string(g.n_t) + ")";
        });

    m.def("make_grid", &make_grid, py::arg("M"));

    m.def(
        "wave_snapshot",
        [](const Arr& x, double t, bool zero_pad) {
            const CartesianImage out = wave_snapshot(image_from(x), t, zero_pad);
            return to_numpy(out.v, out.M, out.M);
        },
        py::arg("x"), py::arg("t"), py::arg("zero_pad") = true);

    m.def(
        "forward",
        [](const Arr& x, bool zero_pad) {
            const CartesianImage img = image_from(x);
            const GridSpec g = make_grid(img.M);
            const Sinogram s = forward(img, g, zero_pad);
            return to_numpy(s.v, s.n_det, s.n_t);
        },
        py::arg("x"), py::arg("zero_pad") = true);

    m.def(
        "forward_blurred",
        [](const Arr& x, const std::string& kernel, bool zero_pad) {
            const CartesianImage img = image_from(x);
            const GridSpec g = make_grid(img.M);
            const Sinogram s = forward_blurred(img, kernel_arg(kernel, g.n_phi), g, zero_pad);
            return to_numpy(s.v, s.n_det, s.n_t);
        },
        py::arg("x"), py::arg("kernel"), py::arg("zero_pad") = true);

    m.def(
        "inverse",
        [](const Arr& g_arr, int M) {
            const GridSpec g = make_grid(M);
            const CartesianImage img = fbp_inverse(sino_from(g_arr), g);
            return to_numpy(img.v, img.M, img.M);
        },
        py::arg("sinogram"), py::arg("M"));

    m.def(
        "to_polar",
        [](const Arr& x) {
            const CartesianImage img = image_from(x);
            const GridSpec g = make_grid(img.M);
            const PolarImage p = to_polar(img, g);
            return to_numpy(p.v, p.n_phi, p.n_r);
        },
        py::arg("x"));

    m.def(
        "to_cartesian",
        [](const Arr& p_arr, int M) {
            const GridSpec g = make_grid(M);
            const CartesianImage img = to_cartesian(polar_from(p_arr), g);
            return to_numpy(img.v, img.M, img.M);
        },
        py::arg("p"), py::arg("M"));

    m.def(
        "make_kernel",
        [](const std::string& name, int n_phi) {
            const AngularKernel k = make_kernel(name, n_phi);
            py::array_t<double> out(static_cast<ssize_t>(k.w.size()));
            std::copy(k.w.begin(), k.w.end(), static_cast<double*>(out.request().ptr));
            return out;
        },
        py::arg("name"), py::arg("n_phi"));

    m.def(
        "angular_convolve",
        [](const Arr& p_arr, const std::string& kernel) {
            const PolarImage p = polar_from(p_arr);
            const PolarImage out = angular_convolve(p, kernel_arg(kernel, p.n_phi));
            return to_numpy(out.v, out.n_phi, out.n_r);
        },
        py::arg("p"), py::arg("kernel"));

    m.def(
        "angular_convolve_adjoint",
        [](const Arr& p_arr, const std::string& kernel) {
            const PolarImage p = polar_from(p_arr);
            const PolarImage out = angular_convolve_adjoint(p, kernel_arg(kernel, p.n_phi));
            return to_numpy(out.v, out.n_phi, out.n_r);
        },
        py::arg("p"), py::arg("kernel"));

    m.def(
        "synth_vessel_phantom",
        [](uint64_t seed, int M) {
            const CartesianImage img = synth_vessel_phantom(seed, M);
            return to_numpy(img.v, img.M, img.M);
        },
        py::arg("seed"), py::arg("M"));

    m.def(
        "sample_measurement_noise",
        [](double sigma, uint64_t seed, int M) {
            const GridSpec g = make_grid(M);
            const Sinogram s = sample_measurement_noise({0.0, sigma, seed}, g);
            return to_numpy(s.v, s.n_det, s.n_t);
        },
        py::arg("sigma"), py::arg("seed"), py::arg("M"));

    m.def(
        "sample_polar_noise",
        [](double sigma, uint64_t seed, int M) {
            const GridSpec g = make_grid(M);
            const PolarImage p = sample_polar_noise({0.0, sigma, seed}, g);
            return to_numpy(p.v, p.n_phi, p.n_r);
        },
        py::arg("sigma"), py::arg("seed"), py::arg("M"));

    m.def(
        "emd",
        [](const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b) {
            const auto [cost, plan] = emd(a, b);
            return py::make_tuple(cost, to_numpy(plan.flow, plan.n, plan.n));
        },
        py::arg("samples_a"), py::arg("samples_b"));

    m.def(
        "sharp_oracle",
        [](const Arr& x, bool zero_pad) {
            const CartesianImage img = image_from(x);
            const CartesianImage out = sharp_oracle(img, make_grid(img.M), zero_pad);
            return to_numpy(out.v, out.M, out.M);
        },
        py::arg("x"), py::arg("zero_pad") = true);

    m.def(
        "psnr",
        [](const Arr& recon, const Arr& oracle) { return psnr(image_from(recon), image_from(oracle)); },
        py::arg("recon"), py::arg("oracle"));
}
