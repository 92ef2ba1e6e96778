"""Regression-suite rings, embedded as text records in the ring file format.

These records double as documentation of the plain-text format: header line
`p=<p>;shape=<k1>,<k2>,...`, then one line `c[i][j]=<a1>,...,<am>` per basis
pair in row-major order, 1-based indices, entries reduced.
"""

EXAMPLE_RECORDS: dict[str, str] = {
    # Z/8Z on the basis x = 1.
    "z8": "p=2;shape=3\nc[1][1]=1\n",
    # Mixed-characteristic ring on C(9)+C(9): x1^2 = 5x2, x1x2 = x2x1 = x1+x2,
    # x2^2 = 2x1+3x2.  Associative but its flattening is not.
    "mixed9": (
        "p=3;shape=2,2\n"
        "c[1][1]=0,5\n"
        "c[1][2]=1,1\n"
        "c[2][1]=1,1\n"
        "c[2][2]=2,3\n"
    ),
    # The same ring presented on the basis (e, x) with e the identity and
    # x^2 = 3e.  Flattening this presentation IS associative.
    "mixed9_unital_basis": (
        "p=3;shape=2,2\n"
        "c[1][1]=1,0\n"
        "c[1][2]=0,1\n"
        "c[2][1]=0,1\n"
        "c[2][2]=3,0\n"
    ),
    # Unital ring on C(9)+C(9) with x^2 = 6e; not isomorphic to the one above.
    "mixed9_variant6": (
        "p=3;shape=2,2\n"
        "c[1][1]=1,0\n"
        "c[1][2]=0,1\n"
        "c[2][1]=0,1\n"
        "c[2][2]=6,0\n"
    ),
    # F_2[X]/(X^3) on the basis 1, X, X^2.
    "f2_x3": (
        "p=2;shape=1,1,1\n"
        "c[1][1]=1,0,0\n"
        "c[1][2]=0,1,0\n"
        "c[1][3]=0,0,1\n"
        "c[2][1]=0,1,0\n"
        "c[2][2]=0,0,1\n"
        "c[2][3]=0,0,0\n"
        "c[3][1]=0,0,1\n"
        "c[3][2]=0,0,0\n"
        "c[3][3]=0,0,0\n"
    ),
    # F_3[X]/(X^4) on the basis 1, X, X^2, X^3.
    "f3_x4": (
        "p=3;shape=1,1,1,1\n"
        "c[1][1]=1,0,0,0\n"
        "c[1][2]=0,1,0,0\n"
        "c[1][3]=0,0,1,0\n"
        "c[1][4]=0,0,0,1\n"
        "c[2][1]=0,1,0,0\n"
        "c[2][2]=0,0,1,0\n"
        "c[2][3]=0,0,0,1\n"
        "c[2][4]=0,0,0,0\n"
        "c[3][1]=0,0,1,0\n"
        "c[3][2]=0,0,0,1\n"
        "c[3][3]=0,0,0,0\n"
        "c[3][4]=0,0,0,0\n"
        "c[4][1]=0,0,0,1\n"
        "c[4][2]=0,0,0,0\n"
        "c[4][3]=0,0,0,0\n"
        "c[4][4]=0,0,0,0\n"
    ),
    # Order-4 algebras with e^2 = e, x^2 = 0 and the four (ex, xe) patterns.
    "order4_two_sided": (
        "p=2;shape=1,1\nc[1][1]=1,0\nc[1][2]=0,1\nc[2][1]=0,1\nc[2][2]=0,0\n"
    ),
    "order4_annihilating": (
        "p=2;shape=1,1\nc[1][1]=1,0\nc[1][2]=0,0\nc[2][1]=0,0\nc[2][2]=0,0\n"
    ),
    "order4_left_only": (
        "p=2;shape=1,1\nc[1][1]=1,0\nc[1][2]=0,1\nc[2][1]=0,0\nc[2][2]=0,0\n"
    ),
    "order4_right_only": (
        "p=2;shape=1,1\nc[1][1]=1,0\nc[1][2]=0,0\nc[2][1]=0,1\nc[2][2]=0,0\n"
    ),
}
