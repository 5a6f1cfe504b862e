# Algebraic identities behind the families, checked at random points.
from superint.verify import IDENTITIES, identity_suite

for r in identity_suite(IDENTITIES, sample_count=1000, seed=0):
    status = "ok" if r.passed else "FAILED"
    if r.name == "parabolic_reduction":
        print(f"{r.name:20s} failing fraction {r.max_discrepancy:.2f} over {r.points} points  {status}")
    else:
        print(f"{r.name:20s} max relative discrepancy {r.max_discrepancy:.1e} over {r.points} points  {status}")
