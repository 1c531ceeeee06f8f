"""Matrix pencils as two-vertex cycles.

A pair of p x q matrices under transformations (A, B) -> (R A S, R B S) with
unitary R, S is exactly a representation of the cycle with two vertices and
both mappings pointing 1 -> 2.  The classical pencil families map to walk
labels as follows (n >= 1):

    (I_n, J_n(0))      -> G(1, 2n)      nilpotent
    (J_n(0), I_n)      -> G(2, 2n+1)    nilpotent, other anchor
    (F_n, G_n)         -> G(1, 2n-1)    minimal column indices
    (F_n^T, G_n^T)     -> G(2, 2n)      minimal row indices

and every nonsingular eigenvalue lands in the regular part.

Run:  python demos/03_kronecker_pencils.py
"""

import numpy as np

import quiverstair as qs

shape = qs.cycle_shape(2, "><")


def pencil(a1, a2):
    d2, d1 = a1.shape
    return qs.Representation(shape, (d1, d2), (a1, a2))


families = {
    "(I_3, J_3(0))": pencil(np.eye(3), qs.jordan_block(3, 0)),
    "(J_3(0), I_3)": pencil(qs.jordan_block(3, 0), np.eye(3)),
    "(F_3, G_3)": pencil(qs.f_block(3), qs.g_block(3)),
    "(F_3^T, G_3^T)": pencil(qs.f_block(3).T.copy(), qs.g_block(3).T.copy()),
}

print("single blocks, scrambled and recovered:")
for name, rep in families.items():
    s = [qs.random_unitary(d, [11, v]) for v, d in enumerate(rep.dims, 1)]
    dec = qs.regularize(qs.apply_isomorphism(rep, s))
    labels = ", ".join(f"G({l},{r})x{m}" for (l, r), m in sorted(dec.summands.items()))
    print(f"  {name:15s} -> {labels}   regular dim {dec.regular_dim()}")

# A composite pencil: minimal indices + nilpotent + genuine eigenvalues.
composite = qs.direct_sum(
    qs.direct_sum(families["(F_3, G_3)"], families["(I_3, J_3(0))"]),
    pencil(np.diag([2.0, 5.0]).astype(complex), np.eye(2)),
)
s = [qs.random_unitary(d, [12, v]) for v, d in enumerate(composite.dims, 1)]
dec = qs.regularize(qs.apply_isomorphism(composite, s))

print("\ncomposite pencil of dimensions", composite.dims)
for (l, r), mult in sorted(dec.summands.items()):
    print(f"  G({l},{r}) x {mult}")
print("regular dimension:", dec.regular_dim())
# the loop applies the first matrix, then the inverse of the second (that
# arrow points the other way), so (diag(2,5), I) contributes eigenvalues 2, 5
print("monodromy eigenvalues:", np.round(np.sort_complex(dec.monodromy_eigenvalues), 10))
