"""Reference values for the point-wise integrand tests.

An independent, high-precision transcription of the force integrands,
written without looking at the Rust sources. Propagating modes use the
textbook Fresnel form in terms of real q_z and k_z1 = sqrt(eps w^2 - q^2)
(Im k_z1 >= 0) instead of the continued kappa, so the branch handling of the
library is checked as well.

Run with `python3 tools/transcription_oracle.py`; the printed numbers are
pinned in crates/core/tests/transcription.rs.
"""

from mpmath import mp, mpf, mpc, sqrt, exp, coth, conj, pi, sin, cos, re, im

mp.dps = 40


def drude(w, wp, g):
    aw = abs(w)
    e = 1 - wp**2 / (aw * (aw + 1j * g))
    return conj(e) if w < 0 else e


def lorentz(w, a0, w0, ga):
    aw = abs(w)
    a = a0 * w0**2 / (w0**2 - aw**2 - 1j * ga * aw)
    return conj(a) if w < 0 else a


def occ(w, t):
    if t == 0:
        return mpf(0) if w > 0 else mpf(-1)
    return (coth(w / (2 * t)) - 1) / 2


class Scenario:
    def __init__(self, beta, z, t1, t2, wp=1, gd=mpf("0.1"), a0=1, w0=1, ga=mpf("0.1")):
        self.beta, self.z, self.t1, self.t2 = mpf(beta), mpf(z), mpf(t1), mpf(t2)
        self.gamma = 1 / sqrt(1 - self.beta**2)
        self.wp, self.gd, self.a0, self.w0, self.ga = map(mpf, (wp, gd, a0, w0, ga))

    def eps(self, w):
        return drude(w, self.wp, self.gd)

    def im_alpha(self, w):
        return im(lorentz(w, self.a0, self.w0, self.ga))

    def thermal(self, w, wprime):
        return self.im_alpha(wprime) * (occ(w, self.t1) - occ(wprime, self.t2))


def ev_reflection(s, w, kappa):
    """Evanescent amplitudes with kappa real and kappa1(-w) = conj kappa1(w)."""
    aw = abs(w)
    e = s.eps(aw)
    k1 = sqrt(kappa**2 - (e - 1) * aw**2)
    rs = (kappa - k1) / (kappa + k1)
    rp = (e * kappa - k1) / (e * kappa + k1)
    if w < 0:
        rs, rp = conj(rs), conj(rp)
    return rs, rp


def pr_reflection(s, w, q):
    """Propagating amplitudes in the (q_z, k_z1) form, w > 0."""
    e = s.eps(w)
    qz = sqrt(w**2 - q**2)
    kz1 = sqrt(e * w**2 - q**2)
    if im(kz1) < 0:
        kz1 = -kz1
    rs = (qz - kz1) / (qz + kz1)
    rp = (e * qz - kz1) / (e * qz + kz1)
    return rs, rp, qz


def weights(s, wprime, qx, qy, kappa2):
    q2 = qx**2 + qy**2
    g2b2 = s.gamma**2 * s.beta**2
    phis = wprime**2 + 2 * g2b2 * qy**2 * kappa2 / q2
    phip = wprime**2 + 2 * s.gamma**2 * (q2 - s.beta**2 * qx**2) * kappa2 / q2
    return phis, phip


def ev_branch(s, w, qx, qy, sign):
    q2 = qx**2 + qy**2
    kappa = sqrt(q2 - w**2)
    wprime = s.gamma * (w + sign * s.beta * qx)
    rs, rp = ev_reflection(s, w, kappa)
    phis, phip = weights(s, wprime, qx, qy, kappa**2)
    sigma = phis * im(rs) + phip * im(rp)
    return qx / kappa * exp(-2 * kappa * s.z) * s.thermal(w, wprime) * sigma


def ev_ph(s, w, qx, qy):
    return ev_branch(s, w, qx, qy, -1) / s.gamma


def ev_vp(s, w, qx, qy):
    return -8 * pi * ev_branch(s, w, qx, qy, -1)


def ev_dk_folded(s, w, qx, qy):
    return 8 * pi / s.gamma * ev_branch(s, w, qx, qy, -1)


def ev_dk_quadrant(s, w, qx, qy):
    return 16 * pi / s.gamma * (ev_branch(s, w, qx, qy, -1) - ev_branch(s, w, qx, qy, +1))


def pr_branch(s, w, qx, qy, sign):
    q = sqrt(qx**2 + qy**2)
    rs, rp, qz = pr_reflection(s, w, q)
    wprime = s.gamma * (w + sign * s.beta * qx)
    phis, phip = weights(s, wprime, qx, qy, -qz**2)
    # Re(R e^{2 i qz z}) / qz
    phase = exp(2j * qz * s.z)
    sigma = phis * re(rs * phase) + phip * re(rp * phase)
    return qx / qz * s.thermal(w, wprime) * sigma


def pr_ph(s, w, qx, qy):
    return 2 / s.gamma * pr_branch(s, w, qx, qy, -1)


def pr_dk_folded(s, w, qx, qy):
    return 8 * pi / s.gamma * pr_branch(s, w, qx, qy, -1)


def pr_dk_quadrant(s, w, qx, qy):
    """Two-line quadrant form: the -sin and cos parts written separately."""
    q = sqrt(qx**2 + qy**2)
    rs, rp, qz = pr_reflection(s, w, q)
    total = mpf(0)
    for sign, weight in ((-1, 1), (+1, -1)):
        wprime = s.gamma * (w + sign * s.beta * qx)
        phis, phip = weights(s, wprime, qx, qy, -qz**2)
        th = s.thermal(w, wprime)
        sin_part = -sin(2 * qz * s.z) * th * (phis * im(rs) + phip * im(rp))
        cos_part = cos(2 * qz * s.z) * th * (phis * re(rs) + phip * re(rp))
        total += weight * (sin_part + cos_part)
    return 16 * pi / s.gamma * qx / qz * total


def stress(s, w, qx, qy):
    q = sqrt(qx**2 + qy**2)
    rs, rp, _ = pr_reflection(s, w, q)
    wprime = s.gamma * (w - s.beta * qx)
    return -qx * (2 - abs(rp) ** 2 - abs(rs) ** 2) * (occ(w, s.t1) - occ(wprime, s.t2))


def fs_ph(s, w, x):
    wprime = s.gamma * w * (1 - s.beta * x)
    return s.gamma / pi * w**4 * x * (1 - s.beta * x) ** 2 * s.thermal(w, wprime)


def fs_dk(s, w, x):
    w1 = s.gamma * w * (1 + s.beta * x)
    return -4 * s.gamma * w**4 * x * (1 + s.beta * x) ** 2 * s.thermal(w, w1)


def show(name, v):
    if isinstance(v, mpc):
        print(f"{name}: {mp.nstr(v.real, 17)} {mp.nstr(v.imag, 17)}")
    else:
        print(f"{name}: {mp.nstr(v, 17)}")


if __name__ == "__main__":
    show("gamma(0.99)", 1 / sqrt(1 - mpf("0.99") ** 2))

    # Reflection at kappa = 2, omega = 1, Drude(3, 0.3).
    e = drude(mpf(1), mpf(3), mpf("0.3"))
    k1 = sqrt(4 - (e - 1))
    show("rs", (2 - k1) / (2 + k1))
    show("rp", (2 * e - k1) / (2 * e + k1))

    # Weights at beta = 0.5, omega = 1, qx = 0.3, qy = 0.4 (a propagating
    # point: kappa^2 = q^2 - omega^2 < 0).
    s = Scenario("0.5", 1, "0.5", "0.2")
    w, qx, qy = mpf(1), mpf("0.3"), mpf("0.4")
    phis, phip = weights(s, s.gamma * (w - s.beta * qx), qx, qy, qx**2 + qy**2 - w**2)
    show("phis", phis)
    show("phip", phip)

    ev = (mpf("0.4"), mpf("0.7"), mpf("0.2"))
    show("ev_ph", ev_ph(s, *ev))
    show("ev_vp", ev_vp(s, *ev))
    show("ev_dk", ev_dk_folded(s, *ev))
    show("ev_dk_quadrant", ev_dk_quadrant(s, *ev))
    show("ev_ph_reversed", ev_ph(s, -ev[0], -ev[1], ev[2]))

    pr = (mpf("1.2"), mpf("0.5"), mpf("0.3"))
    show("pr_ph", pr_ph(s, *pr))
    show("pr_dk", pr_dk_folded(s, *pr))
    show("pr_dk_quadrant", pr_dk_quadrant(s, *pr))
    show("stress", stress(s, *pr))

    f = Scenario("0.5", 1, 1, 0)
    show("fs_ph", fs_ph(f, mpf("0.8"), mpf("0.5")))
    show("fs_dk", fs_dk(f, mpf("0.8"), mpf("0.5")))
    show("fs_dk_flipped", fs_dk(f, mpf("0.8"), mpf("-0.5")))
