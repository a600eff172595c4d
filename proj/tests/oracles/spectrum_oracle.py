"""Independent evaluation of the wave spectrum golden values used by test_spectrum.

Written from the published formulas with mpmath at 40 digits, sharing no code
with the C++ implementation. Run: python3 tests/oracles/spectrum_oracle.py
"""
from mpmath import mp, mpf, sqrt, exp, log, log10, tanh, quad, pi, cos

mp.dps = 40

G = mpf("9.81")
KM = mpf(370)
CM = mpf("0.23")


def params(u10, omega):
    u10, omega = mpf(u10), mpf(omega)
    kp = G / u10**2 * omega**2
    z0 = mpf("3.7e-5") * u10**2 / G * omega ** mpf("0.9")
    ustar = mpf("0.4") * u10 / log(10 / z0)
    if ustar <= CM:
        am = mpf("0.01") * (1 + log(ustar / CM))
    else:
        am = mpf("0.01") * (1 + 3 * log(ustar / CM))
    gam = mpf("1.7") if omega < 1 else mpf("1.7") + 6 * log10(omega)
    sig = mpf("0.08") * (1 + 4 / omega**3)
    return dict(kp=kp, ustar=ustar, am=am, ap=mpf("6e-3") * sqrt(omega), gam=gam, sig=sig,
                omega=omega, cp=c(kp))


def c(k):
    return sqrt(G / k * (1 + (k / KM) ** 2))


def lpm_jp(k, p):
    lpm = exp(-mpf(5) / 4 * (p["kp"] / k) ** 2)
    Gm = exp(-((sqrt(k / p["kp"]) - 1) ** 2) / (2 * p["sig"] ** 2))
    return lpm * p["gam"] ** Gm


def bl(k, p):
    return p["ap"] / 2 * p["cp"] / c(k) * lpm_jp(k, p) * exp(
        -p["omega"] / sqrt(10) * (sqrt(k / p["kp"]) - 1))


def bh(k, p):
    return p["am"] / 2 * CM / c(k) * lpm_jp(k, p) * exp(-((k / KM - 1) ** 2) / 4)


def S(k, p):
    return (bl(k, p) + bh(k, p)) / k**3


def delta(k, p):
    ck = c(k)
    return tanh(log(2) / 4 + 4 * (ck / p["cp"]) ** mpf("2.5")
                + mpf("0.13") * p["ustar"] / CM * (CM / ck) ** mpf("2.5"))


if __name__ == "__main__":
    p = params(5, "0.84")
    kp = p["kp"]
    out = {
        "k_p": kp,
        "c_p": p["cp"],
        "u_star": p["ustar"],
        "alpha_m": p["am"],
        "B_l(k_p)": bl(kp, p),
        "B_h(k_m)": bh(KM, p),
        "B_h(2k_m)": bh(2 * KM, p),
        "S(k_p)": S(kp, p),
        "S(1.0)": S(mpf(1), p),
        "S(100)": S(mpf(100), p),
        "Delta(k_p)": delta(kp, p),
        "Delta(10)": delta(mpf(10), p),
        "D(1, 0.3)": (1 + delta(mpf(1), p) * cos(mpf("0.6"))) / (2 * pi),
    }
    pts = [mpf("1e-3"), kp / 4, kp / 2, kp, 2 * kp, 4 * kp, 10, 100, KM, 1000, mpf("1e4")]
    var = quad(lambda k: S(k, p), pts)
    out["Hs"] = 4 * sqrt(var)
    for k, v in out.items():
        print(f"{k:12s} {mp.nstr(v, 17)}")
