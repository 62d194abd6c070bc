"""Pointwise absolute error vs size for each method at a fixed time.

Reads profile.csv and draws |value - exact| on a log scale; the exact column
must be populated for every row.
"""

import sys

from plots import common


def render(spec, rows_by_input, out_path):
    rows = rows_by_input["profile.csv"]
    if any(r["exact"] is None for r in rows):
        raise common.InputError(
            "profile.csv: column 'exact' is empty for some rows; figure %s "
            "needs a case with a closed-form solution" % spec.figure
        )

    fig = common.new_figure(figsize=(6.0, 4.0))
    ax = fig.add_subplot(1, 1, 1)
    for method in common.distinct(rows, "method"):
        for order in common.distinct(rows, "order"):
            sub = common.select(rows, method=method, order=order)
            if not sub:
                continue
            sizes = [r["size"] for r in sub]
            errors = [abs(r["value"] - r["exact"]) for r in sub]
            label = "%s, n = %d" % (common.METHOD_LABELS.get(method, method), order)
            ax.semilogy(sizes, errors, common.METHOD_STYLES.get(method), label=label)
    ax.set_xlabel("size")
    ax.set_ylabel("absolute error")
    ax.set_title(spec.title)
    ax.legend()
    fig.tight_layout()
    common.save_figure(fig, out_path)


def main(argv=None):
    return common.run_figure_script("error_curves", render, argv)


if __name__ == "__main__":
    sys.exit(main())
