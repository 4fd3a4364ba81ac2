"""Quick check that the extension imports and agrees with known values."""

import math

import breather_lab_py as bl


def close(a, b, tol):
    assert abs(a - b) <= tol, f"{a} vs {b}"


def main():
    print("breather_lab_py", bl.__version__)

    p = bl.Breather("peregrine")
    close(abs(p(0.0, 0.0)), 3.0, 1e-14)
    xs, u = p.sample(0.0, 256, length=50.0)
    assert len(xs) == len(u) == 256
    close(max(abs(v) for v in u), 3.0, 1e-12)

    km = bl.Breather("km", a=1.0)
    beta = math.sqrt(2.0)
    f = km.functionals(0.0, 4096, length=400.0)
    close(f["M"], 4 * beta, 1e-4 * 4 * beta)
    close(f["lyapunov_coefficient"], beta**2, 1e-12)
    r = km.residual(0.3, 4096, length=200.0)
    assert r["equation"] == "Ec_KM" and r["sup"] < 1e-6, r

    ak = bl.Breather("akhmediev", a=0.25)
    close(ak.period(), 2 * math.pi, 1e-12)
    assert ak.residual(0.7, 256)["sup"] < 1e-6

    h = bl.Breather("km", a=0.8).hessian(0.5, 512, 6, length=80.0)
    assert h["kernel_residual"] < 1e-4 * h["spectral_norm"], h["kernel_residual"]

    fit = bl.mi_growth_rate(1.0)
    close(fit["rate"], bl.mi_theory_rate(1.0), 0.05)

    s = bl.Breather("soliton")
    xs, u0 = s.sample(0.0, 1024, length=40.0)
    u1, diag = bl.evolve(u0, 40.0, 0.0, 1.0, 1e-3, splitting="yoshida4", record_every=100, reference=s)
    _, exact = s.sample(1.0, 1024, length=40.0)
    assert max(abs(a - b) for a, b in zip(u1, exact)) < 1e-6
    close(diag["M"][-1], diag["M"][0], 1e-10)

    try:
        bl.Breather("akhmediev", a=0.6)
    except ValueError:
        pass
    else:
        raise AssertionError("a = 0.6 accepted for akhmediev")

    print("ok")


if __name__ == "__main__":
    main()
