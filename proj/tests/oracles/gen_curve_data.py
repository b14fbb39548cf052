"""Writes data/curves/<label>.curve and data/local/<label>.local from PARI/GP (cypari).

Local rows cover every fundamental d with gcd(d, 2N) = 1 and |d| <= --max-abs-d:
    d  prod_p c_p(E^(d))  #E^(d)(Q)_tors  u
where Omega(E^(d)) sqrt|d| = u * Omega_sign(E), Omega_sign the real period for d > 0 and
the imaginary period for d < 0.
"""
import argparse
import math
import pathlib

from cypari import pari

CURVES = {
    "11a1": [0, -1, 1, -10, -20],
    "14a1": [1, 0, 1, 4, -6],
    "37b1": [0, 1, 1, -23, -50],
}


def bsd_period(E):
    """Real period times the number of real components."""
    w1 = float(pari(E).omega()[0].real())
    return w1 * (2 if float(pari(E).disc()) > 0 else 1)


def curve_record(label, coeffs):
    E = pari(f"ellinit({coeffs})")
    gr = pari(f"ellglobalred(ellinit({coeffs}))")
    N = int(gr[0])
    om = E.omega()
    real = bsd_period(E)
    imag = 2.0 * abs(float(om[1].imag()))
    lines = [f"label={label}"]
    for name, v in zip(["a1", "a2", "a3", "a4", "a6"], coeffs):
        lines.append(f"{name}={v}")
    lines.append(f"conductor={N}")
    lines.append(f"torsion={int(pari(f'elltors(ellinit({coeffs}))')[0])}")
    lines.append(f"real_period={real:.17g}")
    lines.append(f"imag_period={imag:.17g}")
    lines.append(f"root_number={int(pari(f'ellrootno(ellinit({coeffs}))'))}")
    fac = pari(f"factor({N})")
    for i in range(len(fac[0])):
        p = int(fac[0][i])
        lines.append(f"tamagawa_{p}={int(pari(f'elllocalred(ellinit({coeffs}),{p})')[3])}")
        lines.append(f"bad_ap_{p}={int(pari(f'ellap(ellinit({coeffs}),{p})'))}")
    return N, real, imag, "\n".join(lines) + "\n"


def local_rows(coeffs, N, real, imag, max_abs_d):
    rows = []
    for m in range(3, max_abs_d + 1):
        for d in (m, -m):
            if math.gcd(m, 2 * N) != 1 or not bool(pari(f"isfundamental({d})")):
                continue
            Ed = pari(f"ellinit(ellminimalmodel(ellinit(elltwist(ellinit({coeffs}),{d}))))")
            gr = pari(f"ellglobalred(ellinit(ellminimalmodel(ellinit(elltwist(ellinit({coeffs}),{d})))))")
            tam = int(gr[2])
            tors = int(Ed.elltors()[0])
            u = bsd_period(Ed) * math.sqrt(m) / (real if d > 0 else imag)
            u2 = round(2 * u)
            if u2 < 1 or abs(2 * u - u2) > 1e-6:
                raise SystemExit(f"d={d}: period ratio {u} is not a half-integer")
            rows.append((d, tam, tors, u2 / 2))
    rows.sort(key=lambda r: (abs(r[0]), r[0]))
    return rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--data", default=str(pathlib.Path(__file__).resolve().parents[2] / "data"))
    ap.add_argument("--max-abs-d", type=int, default=200000)
    args = ap.parse_args()
    data = pathlib.Path(args.data)
    (data / "curves").mkdir(parents=True, exist_ok=True)
    (data / "local").mkdir(parents=True, exist_ok=True)
    for label, coeffs in CURVES.items():
        N, real, imag, text = curve_record(label, coeffs)
        (data / "curves" / f"{label}.curve").write_text(text)
        rows = local_rows(coeffs, N, real, imag, args.max_abs_d)
        body = "# d tamagawa_product torsion u_tilde\n" + "".join(
            f"{d} {t} {s} {u:g}\n" for d, t, s, u in rows)
        (data / "local" / f"{label}.local").write_text(body)
        print(label, N, len(rows))


if __name__ == "__main__":
    main()
