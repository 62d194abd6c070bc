"""Magnitudes of successive series terms vs size at a fixed time.

Reads components.csv and draws |f_k| against size for each k >= 1, one panel
per method, illustrating how quickly the correction terms shrink.
"""

import sys

from plots import common


def render(spec, rows_by_input, out_path):
    rows = rows_by_input["components.csv"]
    times = common.distinct(rows, "time")
    if len(times) != 1:
        raise common.InputError(
            "components.csv: column 'time' must hold a single time for figure "
            "%s, found %d" % (spec.figure, len(times))
        )
    time = times[0]
    methods = common.distinct(rows, "method")

    fig = common.new_figure(figsize=(5.0 * len(methods), 4.0))
    for index, method in enumerate(methods):
        ax = fig.add_subplot(1, len(methods), index + 1)
        sub = common.select(rows, method=method)
        for k in common.distinct(sub, "k"):
            if k == 0:
                continue
            part = common.select(sub, k=k)
            sizes = [r["size"] for r in part]
            magnitudes = [abs(r["value"]) for r in part]
            ax.semilogy(sizes, magnitudes, label="k = %d" % k)
        ax.set_xlabel("size")
        ax.set_ylabel("|term| at t = %g" % time)
        ax.set_title(common.METHOD_LABELS.get(method, method))
        ax.legend(fontsize="small")
    fig.suptitle(spec.title)
    fig.tight_layout()
    common.save_figure(fig, out_path)


def main(argv=None):
    return common.run_figure_script("coeff_diff", render, argv)


if __name__ == "__main__":
    sys.exit(main())
