"""Reference OPTICS ordering, reachability and xi labels from scikit-learn.

    cargo run -p esgpairs --example dump_points -- points > /tmp/points.csv
    cp /tmp/points.csv tests/fixtures/optics_points.csv
    python3 tests/oracle/optics_reference.py tests/fixtures/optics_points.csv > tests/fixtures/optics_reference.csv

Rows: `set,min_samples,xi,index,order,reachability,label` where `order` is
the point visited at position `index`.
"""
import sys

import numpy as np
import pandas as pd
from sklearn.cluster import OPTICS

frame = pd.read_csv(sys.argv[1])
print("set,min_samples,xi,index,order,reachability,label")
for name, group in frame.groupby("set", sort=False):
    group = group.sort_values("index")
    x = np.array([[float(v) for v in c.split(";")] for c in group["coords"]])
    for min_samples, xi in [(3, 0.05), (4, 0.1), (2, 0.05)]:
        model = OPTICS(min_samples=min_samples, xi=xi, metric="minkowski", p=2).fit(x)
        for i in range(len(x)):
            print(f"{name},{min_samples},{xi},{i},{model.ordering_[i]},{model.reachability_[i]:.17g},{model.labels_[i]}")
