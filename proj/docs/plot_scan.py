# Copyright 2026 The ddkit Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Plot median error against T from a `ddkit scan` CSV.

    python docs/plot_scan.py scan.csv scan.png
"""

import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def main(csv_path, png_path):
    rows = pd.read_csv(csv_path)
    fig, ax = plt.subplots(figsize=(5, 4))
    for op, group in rows.groupby("operator"):
        med = group.groupby("T")["error"].median()
        ax.loglog(med.index, med.values, "o-", label=op)
    ax.set_xlabel("T ||H||")
    ax.set_ylabel("median error")
    ax.legend()
    fig.tight_layout()
    fig.savefig(png_path, dpi=120)


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
