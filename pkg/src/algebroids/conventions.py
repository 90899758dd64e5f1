"""The frozen convention ledger.

Every sign and ordering choice that the exact identity checks depend on is
recorded here, in one place.  The ledger text is hashed and the hash is
stamped into every report, so a drifting convention cannot silently
invalidate previously produced output.  docs/CONVENTIONS.md carries the
same content with discussion.
"""

from __future__ import annotations

import hashlib

LEDGER_VERSION = 1

LEDGER = """\
convention ledger, version 1

1.  monomial order: graded lexicographic; at equal total degree the
    exponent tuple decides, earlier variables first.
2.  canonical rational function: numerator and denominator divided by
    their gcd, denominator monic in the order of (1).
3.  single contraction is first-slot: removing frame index j from
    position t of an increasing tuple carries the sign (-1)^t, so
    contracting the first dual frame vector out of e1^e2 gives +e2.
4.  a wedge of forms contracts a multivector with the LAST wedge factor
    acting first.
5.  a wedge of multivectors contracts a form with the FIRST wedge factor
    acting first.  (3)+(4)+(5) are pinned jointly by the exactness of the
    modular comparison checks; flipping (5) breaks them.
6.  evaluation of forms on frame tuples follows the determinant
    convention; coefficients sit on strictly increasing index tuples.
7.  top pairing of the full frame wedge with the full dual frame wedge
    is +1 (plain coefficient product; it is not routed through (3)-(5)).
8.  differential on forms: alternating sum of anchor actions with signs
    (-1)^i plus bracket insertions with signs (-1)^(i+j), indices 0-based.
9.  schouten bracket: extends the frame bracket; on a function in the
    right slot it is the anchor action; graded symmetry
    [P,Q] = -(-1)^((p-1)(q-1)) [Q,P]; the Leibniz signs follow from the
    closed formula in the source of core.schouten.
10. sharp map of a bivector: <beta, sharp alpha> = pi(alpha, beta),
    equivalently sharp alpha is the first-slot contraction of alpha into
    pi; pinned by the compatibility equation on the nondegenerate
    rank-four corpus structure.
11. twisted bracket of 1-forms: lie derivative terms minus the exact term
    of the bivector pairing PLUS the 3-form evaluated on the two sharp
    images, where psi(u, v, .) contracts u first; pinned jointly by the
    axiom checks of the dual algebroid, the morphism property of sharp,
    and the modular comparison identity.
12. degree-lowering operator on forms: d o i_pi - i_pi o d.
13. the generator value on a top form lam is declared as minus the
    contraction of Z into lam.
"""


def ledger_hash() -> str:
    return hashlib.sha256(LEDGER.encode("utf-8")).hexdigest()[:12]
