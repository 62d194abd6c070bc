"""Moments vs time for each method, with reference curves where available.

Reads moments.csv and draws one line per (method, j), plus the exact moment
(dashed) whenever the exact column is populated for that j.
"""

import sys

from plots import common


def render(spec, rows_by_input, out_path):
    rows = rows_by_input["moments.csv"]
    js = common.distinct(rows, "j")

    fig = common.new_figure(figsize=(6.0, 4.0))
    ax = fig.add_subplot(1, 1, 1)
    dashes = {0: "-", 1: "--", 2: ":", 3: "-."}
    for j in js:
        style = dashes.get(j, "-")
        for method in common.distinct(rows, "method"):
            sub = common.select(rows, method=method, j=j)
            if not sub:
                continue
            times = [r["time"] for r in sub]
            values = [r["value"] for r in sub]
            label = "M%d, %s" % (j, common.METHOD_LABELS.get(method, method))
            ax.plot(
                times,
                values,
                linestyle=style,
                color=common.METHOD_STYLES.get(method),
                label=label,
            )
        exact_rows = [
            r
            for r in common.select(rows, j=j, method=common.distinct(rows, "method")[0])
            if r["exact"] is not None
        ]
        if exact_rows:
            ax.plot(
                [r["time"] for r in exact_rows],
                [r["exact"] for r in exact_rows],
                linestyle=style,
                color="k",
                alpha=0.6,
                label="M%d, reference" % j,
            )
    ax.set_xlabel("time")
    ax.set_ylabel("moment value")
    ax.set_title(spec.title)
    ax.legend(fontsize="small")
    fig.tight_layout()
    common.save_figure(fig, out_path)


def main(argv=None):
    return common.run_figure_script("moments", render, argv)


if __name__ == "__main__":
    sys.exit(main())
