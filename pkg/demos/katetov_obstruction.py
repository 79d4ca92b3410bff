"""Why some one-point metric extensions cannot live in a group of exponent N.

A Katetov map f prescribes distances from a new point b.  In a group of
exponent N the element b also satisfies N*b = 0, which forces an extra
inequality over N-tuples.  This script shows a map that is a perfectly good
metric extension yet violates that inequality, and then a map that passes
and gets realized by an explicit extension.
"""

from fractions import Fraction as F

from valgroups.errors import AdmissibilityError
from valgroups.extension import KatetovMap, check_trvN, extend_onegen
from valgroups.groups import FiniteAbelianGroup
from valgroups.values import validate_value


def main():
    Z3 = FiniteAbelianGroup([3])
    q = validate_value(Z3, [0, 1, 1], N=3)
    f = KatetovMap(q, {(0,): F(3, 2), (1,): F(1, 2), (2,): F(1, 2)})
    ok, witness = check_trvN(f, 3)
    print("order-3 map passes the exponent test:", ok, "witness:", witness)
    try:
        extend_onegen(q, f, 3)
    except AdmissibilityError as exc:
        print("extension refused:", exc)

    g = KatetovMap(q, {(0,): F(1, 2)})
    ext = extend_onegen(q, g, 3)
    R, b = ext.result, ext.witness
    print(f"point at distance 1/2 from 0: new group {R.group.factors}, b={b}, "
          f"p(b)={R(b)}, p(2b)={R(R.group.mul(2, b))}, m={ext.m}")


if __name__ == "__main__":
    main()
