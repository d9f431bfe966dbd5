#!/usr/bin/env python3
"""Regenerates data/curves.tsv, data/newforms.tsv and data/newform_levels.tsv.

Needs cypari2 with PARI's elldata package (Cremona's tables). The shipped
TSV files are the only thing the C++ library reads; this script documents
where they came from.

    pip install passagemath-pari passagemath-pari-elldata
    python tools/gen_data.py --datadir <pari share dir> --out data
"""

import argparse
import os

import cypari2

pari = cypari2.Pari()
pari.allocatemem(2 * 10**9)

# Levels carrying Frey-curve newforms for 1 <= D <= 100 once Cohn's
# reduction is applied (d1 > 1, or d1 = 1 with D = 7 mod 8 and t odd).
COEFF_LEVELS = [14, 20, 30, 42, 46, 62, 78, 94, 96, 110, 142, 158, 160,
                174, 190, 384, 480, 1056]

# Every level predicted for some signature of some 1 <= D <= 100, plus 2.
DIM_LEVELS = [1, 2, 4, 8, 12, 14, 20, 24, 30, 32, 40, 42, 46, 52, 56, 62, 68,
              78, 84, 88, 94, 96, 110, 120, 128, 142, 152, 158, 160, 174, 184,
              190, 224, 352, 384, 416, 480, 544, 608, 640, 672, 736, 896, 928,
              992, 1056, 1120, 1184, 1248, 1312, 1376, 1408, 1504, 1632, 1664,
              1696, 1760, 1824, 1888, 1920, 1952, 2080, 2144, 2176, 2208, 2272,
              2336, 2432, 2464, 2528, 2656, 2688, 2720, 2784, 2848, 2912, 2944,
              2976, 3040, 3104, 3712, 3968, 4224, 4480, 4736, 4992, 5248, 5504,
              6016]

# Class order at level 190 follows the printed q-expansions f1..f4
# (Cremona classes b, a, c, then the quadratic form).
ORDER_OVERRIDE = {190: ["190b", "190a", "190c"]}

LMAX = 1000


def primes_upto(n):
    return [int(p) for p in pari.primes([2, n])]


def coordinates(coeffs, poly):
    """Coordinates of every c_l in the basis 1, y, ..., y^(d-1)."""
    d = int(pari.poldegree(poly))
    out = {}
    for l, c in coeffs.items():
        v = pari.lift(c)
        x = [pari.polcoef(v, j) for j in range(d)]
        if any(pari.denominator(t) != 1 for t in x):
            raise RuntimeError("non-integral coefficient")
        out[l] = [int(t) for t in x]
    return [int(pari.polcoef(poly, j)) for j in range(d + 1)], out


def rational_label(level, ap):
    for rec in pari.ellsearch(level):
        label = str(rec[0])
        if not label.endswith("1"):
            continue
        e = pari.ellinit(rec[1])
        if all(int(pari.ellap(e, p)) == a for p, a in ap):
            return label[:-1], e
    raise RuntimeError(f"no curve for level {level}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--datadir", required=True)
    ap.add_argument("--out", default="data")
    args = ap.parse_args()
    pari(f'default(datadir, "{args.datadir}")')

    primes = primes_upto(LMAX)
    curves = {}
    nf_lines = []
    for level in COEFF_LEVELS:
        mf = pari.mfinit([level, 2], 0)
        forms = []
        for f, poly in zip(pari.mfeigenbasis(mf), pari.mffields(mf)):
            co = pari.mfcoefs(f, LMAX)
            coeffs = {}
            for l in primes:
                c = co[l]
                if pari.type(c) != "t_POLMOD":
                    c = pari.Mod(c, poly) if pari.poldegree(poly) > 1 else c
                coeffs[l] = c
            if pari.poldegree(poly) <= 1:
                vals = {l: int(c if pari.type(c) != "t_POLMOD" else pari.lift(c))
                        for l, c in coeffs.items()}
                good = [(p, vals[p]) for p in primes[:25] if level % p]
                cls, e = rational_label(level, good)
                forms.append((0, cls, [0, 1], {l: [v] for l, v in vals.items()}))
                ee = pari(f"ellinit(\"{cls}1\")")
                tors = int(pari.elltors(ee)[0])
                curves[cls + "1"] = ([int(a) for a in ee[:5]], tors % 2 == 0)
            else:
                fp, vals = coordinates(coeffs, poly)
                forms.append((1, "", fp, vals))
        order = ORDER_OVERRIDE.get(level)
        if order:
            forms.sort(key=lambda t: (t[0], order.index(t[1]) if t[1] in order else 99))
        else:
            forms.sort(key=lambda t: (t[0], t[1]))
        for idx, (_, cls, fp, vals) in enumerate(forms, 1):
            ent = [f"{l}:" + ",".join(str(x) for x in vals[l]) for l in primes]
            nf_lines.append("\t".join([str(level), str(idx), ",".join(map(str, fp))] + ent))

    # Table 4 labels that are not the first curve of their class.
    for lab in ["384d1", "384a1", "384g1", "384h1", "480b1", "480f1", "480g1",
                "480h1", "96a1", "96b1", "1056b1", "1056f1", "142c1", "158e1",
                "174d1", "20a1", "42a1", "14a1", "30a1", "46a1", "62a1", "78a1",
                "94a1", "160a1", "160b1"]:
        e = pari(f"ellinit(\"{lab}\")")
        curves[lab] = ([int(a) for a in e[:5]], int(pari.elltors(e)[0]) % 2 == 0)

    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "curves.tsv"), "w") as fh:
        fh.write("# label\ta1\ta2\ta3\ta4\ta6\ttwo_torsion\n")
        for lab in sorted(curves, key=lambda s: (int("".join(c for c in s if c.isdigit())[:-1] or 0), s)):
            a, t = curves[lab]
            fh.write("\t".join([lab.upper()] + [str(x) for x in a] + ["1" if t else "0"]) + "\n")
    with open(os.path.join(args.out, "newforms.tsv"), "w") as fh:
        fh.write("# level\tclass\tfield_poly (constant first)\tl:c_l coordinates in the power basis\n")
        fh.write("\n".join(nf_lines) + "\n")
    with open(os.path.join(args.out, "newform_levels.tsv"), "w") as fh:
        fh.write("# level\tnew_dimension\tgalois_classes (-1 when not split)\n")
        for level in DIM_LEVELS:
            dim = int(pari.mfdim([level, 2], 0))
            if level in COEFF_LEVELS or dim == 0:
                classes = sum(1 for ln in nf_lines if ln.split("\t")[0] == str(level))
            else:
                classes = -1
            fh.write(f"{level}\t{dim}\t{classes}\n")


if __name__ == "__main__":
    main()
