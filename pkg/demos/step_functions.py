"""Step functions with values in a finite valued group, and the integral norm.

t * u stretches time by t, so the norm scales exactly by t.  A table that
weights one kind of piece differently breaks this and is caught.
"""

from fractions import Fraction as F

from valgroups.groups import FiniteAbelianGroup
from valgroups.piecewise import identity, nabla
from valgroups.pv import check_kappa_norm, corrupted_norm, hat, norming_validate
from valgroups.values import validate_value


def main():
    H = validate_value(FiniteAbelianGroup([4]), [0, F(1, 2), 1, F(1, 2)])
    u = hat(H, (1,)) + hat(H, (1,)).act(F(5, 2))
    print("u =", u, " ||u|| =", u.norm())
    for t in (F(1, 3), 2, 7):
        print(f"  ||{t} * u|| = {u.act(t).norm()}  (t ||u|| = {t * u.norm()})")
    for name, k in (("nabla", nabla()), ("id", identity())):
        print(name, "->", norming_validate(k))
    samples = [hat(H, (1,)), hat(H, (2,))]
    bad = check_kappa_norm(samples, nabla(), [F(1, 2), 1, 2, 10], corrupted_norm(H, (2,), 3, 2))
    print("corrupted norm violations:", len(bad.violations), "first:", bad.violations[0][::2])


if __name__ == "__main__":
    main()
