"""Smoke tests for the patdeblur extension module."""

import math
import sys

import numpy as np

import patdeblur as pd


def check(cond, msg):
    if not cond:
        print(f"[FAIL] {msg}")
        sys.exit(1)
    print(f"[ok] {msg}")


def main():
    g = pd.make_grid(64)
    check(g.n_det == 201 and g.n_r == 32 and g.n_phi == 201 and g.n_t == 64,
          "make_grid(64) derives 201/32/201/64")

    # phantom -> forward -> inverse round trip
    x = pd.synth_vessel_phantom(7, 64)
    check(x.shape == (64, 64) and 0.0 <= x.min() and x.max() <= 1.0,
          "vessel phantom is a [0,1] image")

    sino = pd.forward(x)
    check(sino.shape == (201, 64), "forward sinogram has shape (n_det, n_t)")

    rec = pd.inverse(sino, 64)
    yy, xx = np.meshgrid(np.arange(64), np.arange(64), indexing="ij")
    px = -1 + (2 * xx + 1) / 64
    py = -1 + (2 * yy + 1) / 64
    mask = px**2 + py**2 <= 0.9**2
    err = np.linalg.norm((rec - x)[mask]) / np.linalg.norm(x[mask])
    check(err < 0.35, f"fbp o forward recovers the phantom (rel err {err:.3f})")

    # delta kernel identity, bit-exact
    p = pd.to_polar(x)
    check(np.array_equal(pd.angular_convolve(p, "delta"), p),
          "delta kernel is a bit-exact identity")

    # adjoint identity
    rng = np.random.default_rng(0)
    a = rng.standard_normal(p.shape)
    b = rng.standard_normal(p.shape)
    lhs = float(np.sum(pd.angular_convolve(a, "indicator-20") * b))
    rhs = float(np.sum(a * pd.angular_convolve_adjoint(b, "indicator-20")))
    check(abs(lhs - rhs) <= 1e-10 * np.linalg.norm(a) * np.linalg.norm(b),
          "angular convolution adjoint identity")

    # kernel normalization
    k = pd.make_kernel("gaussian-1", 201)
    check(abs(k.sum() - 1.0) < 1e-12 and (k >= 0).all(), "kernels are normalized and nonnegative")

    # polar round trip is close on the interior
    back = pd.to_cartesian(p, 64)
    err2 = np.linalg.norm((back - x)[mask]) / np.linalg.norm(x[mask])
    check(err2 < 0.5, f"polar round trip stays bounded (rel err {err2:.3f})")

    # emd hand value
    cost, plan = pd.emd([[0.0], [1.0]], [[0.5], [0.5]])
    check(abs(cost - 0.5) < 1e-12, "two-point emd equals 0.5")
    check(plan.shape == (2, 2) and abs(plan.sum() - 1.0) < 1e-12, "transport plan is normalized")

    # deterministic noise
    n1 = pd.sample_measurement_noise(1.0, 11, 64)
    n2 = pd.sample_measurement_noise(1.0, 11, 64)
    check(np.array_equal(n1, n2), "noise draws are seed-deterministic")

    # psnr sentinel
    check(pd.psnr(x, x) == 99.0, "psnr of identical images reports the 99 dB cap")

    print("smoke ok")


if __name__ == "__main__":
    main()
