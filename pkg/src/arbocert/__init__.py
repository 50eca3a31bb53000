"""Arboreal maximality certificates for quadratic rational maps whose
critical orbits collide.

Modules:

- ``tree_group`` — automorphisms of the binary rooted tree, sign
  invariants, and the constant-sign parity subgroups.
- ``exact_field`` — exact arithmetic over Q and Q(sqrt(d)), projective
  points, cross ratios, and square-class linear algebra.
- ``binary_forms`` — homogeneous binary forms: resultants,
  discriminants, composition/iteration identities, critical lifts.
- ``dynamics`` — quadratic maps, critical-orbit collisions, the normal
  form, and the kappa/q/r invariants.
- ``certify`` — the maximality certificate, subset square searches, and
  high-precision numeric verification of the preimage-product
  identities.
- ``suites`` — seeded randomized verification suites.
- ``cli`` — the ``arbocert`` command-line tool.
"""

from __future__ import annotations

from .exact_field import (
    Infinity,
    ProjPoint,
    QuadElem,
    cross_ratio,
    is_square_Q,
    is_square_quad,
    square_class,
    squarefree_part,
)
from .tree_group import (
    TreeAut,
    M_order_log2,
    abelianize,
    cousins_parity,
    enumerate_M,
    enumerate_Mtilde,
    in_M,
    in_Mtilde,
    sgn,
)
from .binary_forms import (
    BForm,
    FormPair,
    critical_lifts,
    discriminant,
    homog_differential,
    iterated_H,
    resultant,
)
from .dynamics import (
    CollisionData,
    KappaList,
    NormalForm,
    QuadMap,
    build_map,
    detect_collision,
    kappa_list,
    normal_form,
    parse_map_text,
)
from .certify import (
    Certificate,
    certify_max,
    subset_square_search,
    verify_lemma_Qn,
    verify_lemma_Rn,
)

__version__ = "0.1.0"

__all__ = [
    "BForm", "Certificate", "CollisionData", "FormPair", "Infinity",
    "KappaList", "M_order_log2", "NormalForm", "ProjPoint", "QuadElem",
    "QuadMap", "TreeAut", "abelianize", "build_map", "certify_max",
    "cousins_parity", "critical_lifts", "cross_ratio", "detect_collision",
    "discriminant", "enumerate_M", "enumerate_Mtilde",
    "homog_differential", "in_M", "in_Mtilde", "is_square_Q",
    "is_square_quad", "iterated_H", "kappa_list", "normal_form",
    "parse_map_text", "resultant", "sgn", "square_class",
    "squarefree_part", "subset_square_search", "verify_lemma_Qn",
    "verify_lemma_Rn",
]
