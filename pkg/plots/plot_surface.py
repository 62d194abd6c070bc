"""Solution surface over the (size, time) grid for one method.

Reads profile.csv produced over a time range and draws the approximate
concentration as a 3-D surface.
"""

import sys

from plots import common


def render(spec, rows_by_input, out_path):
    rows = rows_by_input["profile.csv"]
    method = spec.options["method"]
    rows = common.select(rows, method=method)
    if not rows:
        raise common.InputError(
            "profile.csv: column 'method' holds no '%s' rows for figure %s"
            % (method, spec.figure)
        )
    orders = common.distinct(rows, "order")
    rows = common.select(rows, order=orders[0])
    times = common.distinct(rows, "time")
    sizes = common.distinct(rows, "size")
    if len(times) < 2:
        raise common.InputError(
            "profile.csv: column 'time' must hold a grid of times for figure %s"
            % spec.figure
        )
    lookup = {(r["time"], r["size"]): r["value"] for r in rows}
    try:
        grid = [[lookup[(t, x)] for x in sizes] for t in times]
    except KeyError:
        raise common.InputError(
            "profile.csv: columns 'time'/'size' do not form a full grid for "
            "figure %s" % spec.figure
        )

    import numpy as np

    sizes_mesh, times_mesh = np.meshgrid(np.asarray(sizes), np.asarray(times))
    values = np.asarray(grid)

    fig = common.new_figure(figsize=(6.0, 4.5))
    ax = fig.add_subplot(1, 1, 1, projection="3d")
    ax.plot_surface(
        sizes_mesh, times_mesh, values, cmap="viridis", linewidth=0.0
    )
    ax.set_xlabel("size")
    ax.set_ylabel("time")
    ax.set_zlabel("concentration")
    ax.set_title(spec.title)
    common.save_figure(fig, out_path)


def main(argv=None):
    return common.run_figure_script("surface", render, argv)


if __name__ == "__main__":
    sys.exit(main())
