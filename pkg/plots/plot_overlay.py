"""Overlay of approximate and exact concentration profiles at a fixed time.

Reads profile.csv and draws value vs size for each (method, order) present,
plus the exact profile (dashed) when the exact column is populated.
"""

import sys

from plots import common


def render(spec, rows_by_input, out_path):
    rows = rows_by_input["profile.csv"]
    times = common.distinct(rows, "time")
    if len(times) != 1:
        raise common.InputError(
            "profile.csv: column 'time' must hold a single time for figure %s, "
            "found %d" % (spec.figure, len(times))
        )
    time = times[0]

    fig = common.new_figure(figsize=(6.0, 4.0))
    ax = fig.add_subplot(1, 1, 1)
    exact_drawn = False
    for method in common.distinct(rows, "method"):
        for order in common.distinct(rows, "order"):
            sub = common.select(rows, method=method, order=order)
            if not sub:
                continue
            sizes = [r["size"] for r in sub]
            values = [r["value"] for r in sub]
            label = "%s, n = %d" % (common.METHOD_LABELS.get(method, method), order)
            ax.plot(sizes, values, common.METHOD_STYLES.get(method), label=label)
            if not exact_drawn and all(r["exact"] is not None for r in sub):
                ax.plot(
                    sizes,
                    [r["exact"] for r in sub],
                    "k--",
                    label="exact",
                )
                exact_drawn = True
    ax.set_xlabel("size")
    ax.set_ylabel("concentration at t = %g" % time)
    ax.set_title(spec.title)
    ax.legend()
    fig.tight_layout()
    common.save_figure(fig, out_path)


def main(argv=None):
    return common.run_figure_script("overlay", render, argv)


if __name__ == "__main__":
    sys.exit(main())
