"""Automorphisms of the binary rooted tree and the parity subgroups.

An automorphism of the depth-n binary tree is a portrait of swap bits,
one per internal node.  The sign invariant sgn_m(sigma, y) is the parity
of the permutation sigma induces on the 2^m nodes m levels above y; the
constant-sign group Mtilde_ell consists of the automorphisms for which
all these window signs at a fixed depth agree, and M_ell is the
index-two subgroup where the common sign is +1.
"""

from __future__ import annotations

from arbocert import tree_group as tg

# A single swap at the root of a depth-3 tree exchanges the two subtrees.
sigma = tg.single_swap(3, ())
print("root swap portrait:", sigma.to_hex())
print("action on 010:", "".join(map(str, sigma.apply((0, 1, 0)))))

# sgn_3 at the root is the parity of the full leaf permutation; a root
# swap moves 8 leaves in 4 transpositions, but contributes odd parity
# only in the sgn_1 window.
for m in (1, 2, 3):
    print(f"sgn_{m}(root swap, root) = {tg.sgn(sigma, (), m):+d}")

# Group orders: |M_(ell,n)| = 2^(2^n - 2^(n-ell+1)) once n >= ell.
print()
for ell in (2, 3):
    for n in range(1, 5):
        print(f"|M_({ell},{n})| = 2^{tg.M_order_log2(ell, n)}")

# Membership: a swap two levels down breaks the sign agreement for
# ell = 3 but not for ell = 2.
tau = tg.single_swap(3, (0, 0))
print()
print("single swap at node 00:")
for ell in (2, 3):
    print(f"  in M_{ell}?", tg.in_M(tau, ell))

# The example odd-cousins element: swaps at nodes 00 and 01.  It lies in
# M_2, acts 2-negatively above node 0 and 2-positively above node 1, so
# it is a (2,3)-odd cousins map -- the kind of element that forces full
# parity-group image in the generation criterion.
rho = tg.compose(tg.single_swap(3, (0, 0)), tg.single_swap(3, (0, 1)))
print()
print("odd-cousins example", rho.to_hex())
print("  in M_2:", tg.in_M(rho, 2))
print("  sign above 0:", tg.acts_sign_above(rho, (0,), 2))
print("  sign above 1:", tg.acts_sign_above(rho, (1,), 2))
print("  (2,3)-cousins parity:", tg.cousins_parity(rho, (), 2, 3))

# Abelianization: the parity vector (window signs at the root, then
# cousins parities) is a surjection onto {±1}^n.
print()
print("abelianization of M_(2,3):")
images = {tg.abelianize(s, 2) for s in tg.enumerate_M(2, 3)}
print(f"  image size {len(images)} = 2^3; kernel index 8 in a group of 64")
