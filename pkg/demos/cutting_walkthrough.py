"""Build a cutting for two families of unit circles, check it, then balance a point set."""

import numpy as np

from simplexcount.cuttings import balance_points, random_unit_circles, sample_cutting, verify_cutting
from simplexcount.geom import Point, PointSet

sigmas = [random_unit_circles(20, seed=1), random_unit_circles(20, seed=2)]
cut = sample_cutting(sigmas, r=4, seed=0)
print(f"{len(cut.full_cells())} full cells after {cut.retries} retries")
print(f"max stoppers per class {cut.max_stoppers()} vs thresholds "
      f"{tuple(round(t, 1) for t in cut.thresholds)}")

rep = verify_cutting(cut, sigmas, n_points=5000)
print(f"independent recount passed: {rep.passed}")

rng = np.random.default_rng(0)
pts = PointSet(tuple(Point(tuple(v)) for v in rng.uniform(-1, 1, size=(60, 2))))
bal = balance_points(cut, pts, cap=4)
print(f"after balancing: {len(bal.cells)} cells, fullest holds "
      f"{max(len(c.points) for c in bal.cells)} points")
