"""Ready-made rings and relation instances used across tests and the CLI.

Everything here is a plain construction over explicit variable names:

* the 2x3 minors setup in ZZ[u,v,w,x,y,z], whose three size-two minors
  satisfy one relation against each matrix row;
* the quadric relation among the minors of a 2x4 matrix in
  ZZ[s,t,u,v,w,x,y,z];
* the hypersurface quotient example in ZZ[u,v,w,x,y,z] modulo ux+vy+wz,
  where the variable pairing is a relation only in the quotient;
* the two-variable swap (Koszul) relation.
"""

from __future__ import annotations

from .cohomology import RelationInstance, make_relation
from .polyring import Polynomial, RingSpec, variables


def minors_ring() -> RingSpec:
    """ZZ[u,v,w,x,y,z] housing the generic 2x3 matrix (u,v,w | x,y,z)."""
    return RingSpec(("u", "v", "w", "x", "y", "z"))


def minor_polys(ring: RingSpec | None = None) -> tuple[Polynomial, Polynomial, Polynomial]:
    """The three 2x2 minors (vz-wy, wx-uz, uy-vx) of the generic matrix."""
    ring = ring or minors_ring()
    u, v, w, x, y, z = (Polynomial.variable(ring, name) for name in "uvwxyz")
    return (v * z - w * y, w * x - u * z, u * y - v * x)


def minors_row_relation(row: int = 1, ring: RingSpec | None = None) -> RelationInstance:
    """Relation of the minors against matrix row 1 (u,v,w) or row 2 (x,y,z)."""
    ring = ring or minors_ring()
    if row == 1:
        F = [Polynomial.variable(ring, name) for name in ("u", "v", "w")]
    elif row == 2:
        F = [Polynomial.variable(ring, name) for name in ("x", "y", "z")]
    else:
        raise ValueError("row must be 1 or 2")
    return make_relation(F, list(minor_polys(ring)))


def plucker_ring() -> RingSpec:
    """ZZ[s,t,u,v,w,x,y,z] housing the generic 2x4 matrix (s,u,v,w | t,x,y,z)."""
    return RingSpec(("s", "t", "u", "v", "w", "x", "y", "z"))


def plucker_relation(ring: RingSpec | None = None) -> RelationInstance:
    """The quadric minor relation of the 2x4 matrix.

    F is the minor triple (vz-wy, wx-uz, uy-vx) of the last three columns,
    G the triple (ut-xs, vt-ys, wt-zs) pairing each of those columns with
    the first; the pairing sum telescopes to zero.
    """
    ring = ring or plucker_ring()
    s, t, u, v, w, x, y, z = variables(ring)
    F = [v * z - w * y, w * x - u * z, u * y - v * x]
    G = [u * t - x * s, v * t - y * s, w * t - z * s]
    return make_relation(F, G)


def hypersurface_relation(ring: RingSpec | None = None) -> RelationInstance:
    """The variable pairing (u,v,w) against (x,y,z) modulo ux+vy+wz.

    The pairing sum is the quotient generator itself, so this is a relation
    in the hypersurface quotient but not in the ambient polynomial ring.
    """
    ring = ring or minors_ring()
    u, v, w, x, y, z = variables(ring)
    return make_relation([u, v, w], [x, y, z], [u * x + v * y + w * z])


def koszul_relation(ring: RingSpec | None = None) -> RelationInstance:
    """The swap relation (y, -x) against (x, y) in ZZ[x,y]."""
    ring = ring or RingSpec(("x", "y"))
    x = Polynomial.variable(ring, "x")
    y = Polynomial.variable(ring, "y")
    return make_relation([y, -x], [x, y])
