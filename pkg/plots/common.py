"""Shared infrastructure for the figure scripts.

Provides the figure catalog (which CSV artifacts each figure needs and how to
produce them with the ``cbreak`` command line), strict CSV readers that fail
with the offending file and column named, and an argparse front end shared by
every figure script.
"""

import argparse
import csv
import os
import sys
from dataclasses import dataclass, field


EXIT_INPUT = 2


class InputError(Exception):
    """A required CSV artifact is missing, empty, or malformed."""


@dataclass(frozen=True)
class FigureSpec:
    """One entry of the figure catalog.

    Attributes
    ----------
    figure : str
        Catalog identifier, e.g. ``"4.1A"``.
    family : str
        Name of the plots module that renders it.
    inputs : tuple of str
        CSV file names the figure reads from the input directory.
    commands : tuple of str
        ``cbreak`` invocations (run inside the input directory) that
        produce those CSV files.
    title : str
        Axes title used on the rendered figure.
    options : dict
        Family-specific rendering options (times, moment orders, ...).
    """

    figure: str
    family: str
    inputs: tuple
    commands: tuple
    title: str
    options: dict = field(default_factory=dict)


CATALOG = {
    "4.1A": FigureSpec(
        figure="4.1A",
        family="overlay",
        inputs=("profile.csv",),
        commands=(
            "cbreak profile --case example1 --method both --orders 10"
            " --times 1.5 --sizes 0 10 201",
        ),
        title="Concentration vs size, exponential case, t = 1.5",
    ),
    "4.1B": FigureSpec(
        figure="4.1B",
        family="surface",
        inputs=("profile.csv",),
        commands=(
            "cbreak profile --case example1 --method vim --orders 10"
            " --trange 0 0.6 13 --sizes 0 10 101",
        ),
        title="Iterative-correction solution surface, exponential case",
        options={"method": "vim"},
    ),
    "4.1C": FigureSpec(
        figure="4.1C",
        family="surface",
        inputs=("profile.csv",),
        commands=(
            "cbreak profile --case example1 --method odm --orders 10"
            " --trange 0 1.0 13 --sizes 0 10 101",
        ),
        title="Split-operator solution surface, exponential case",
        options={"method": "odm"},
    ),
    "4.1D": FigureSpec(
        figure="4.1D",
        family="error_curves",
        inputs=("profile.csv",),
        commands=(
            "cbreak profile --case example1 --method both --orders 10"
            " --times 1.5 --sizes 0 10 201",
        ),
        title="Absolute error vs size, exponential case, t = 1.5",
    ),
    "4.1E": FigureSpec(
        figure="4.1E",
        family="moments",
        inputs=("moments.csv",),
        commands=(
            "cbreak moments --case example1 --method both --order 10"
            " --j 0 1 2 --trange 0 1.0 21",
        ),
        title="Moments vs time, exponential case",
    ),
    "4.2A": FigureSpec(
        figure="4.2A",
        family="coeff_diff",
        inputs=("components.csv",),
        commands=(
            "cbreak components --case example2 --method both --order 10"
            " --times 1.0 --sizes 0 10 201",
        ),
        title="Successive-term magnitudes, gamma-type case, t = 1.0",
    ),
    "4.2B": FigureSpec(
        figure="4.2B",
        family="overlay",
        inputs=("profile.csv",),
        commands=(
            "cbreak profile --case example2 --method both --orders 10"
            " --times 1.5 --sizes 0 10 201",
        ),
        title="Concentration vs size, gamma-type case, t = 1.5",
    ),
    "4.2C": FigureSpec(
        figure="4.2C",
        family="moments",
        inputs=("moments.csv",),
        commands=(
            "cbreak moments --case example2 --method both --order 10"
            " --j 0 1 --trange 0 1.0 21",
        ),
        title="Moments vs time, gamma-type case",
    ),
    "4.3A": FigureSpec(
        figure="4.3A",
        family="coeff_diff",
        inputs=("components.csv",),
        commands=(
            "cbreak components --case example3 --method both --order 3"
            " --times 0.2 --sizes 0 10 201",
        ),
        title="Successive-term magnitudes, discrete case, t = 0.2",
    ),
    "4.3B": FigureSpec(
        figure="4.3B",
        family="overlay",
        inputs=("profile.csv",),
        commands=(
            "cbreak profile --case example3 --method both --orders 3"
            " --times 0.2 --sizes 0 10 201",
        ),
        title="Concentration vs size, discrete case, t = 0.2",
    ),
    "4.3C": FigureSpec(
        figure="4.3C",
        family="moments",
        inputs=("moments.csv",),
        commands=(
            "cbreak moments --case example3 --method both --order 3"
            " --j 0 1 2 --trange 0 0.5 21",
        ),
        title="Moments vs time, discrete case",
    ),
}

# Column -> parser for each CSV schema the figures consume.  A value of
# str keeps the field as text; float requires a parseable number.
SCHEMAS = {
    "profile.csv": {
        "time": float,
        "method": str,
        "order": int,
        "size": float,
        "value": float,
        "exact": "optional_float",
    },
    "moments.csv": {
        "time": float,
        "method": str,
        "order": int,
        "j": int,
        "value": float,
        "exact": "optional_float",
    },
    "components.csv": {
        "time": float,
        "method": str,
        "k": int,
        "size": float,
        "value": float,
    },
}


def _convert(raw, spec, path, column, line):
    if spec is str:
        return raw
    if spec == "optional_float":
        if raw == "":
            return None
        spec = float
    try:
        return spec(raw)
    except ValueError:
        raise InputError(
            "%s: line %d, column '%s': cannot parse %r" % (path, line, column, raw)
        )


def load_csv(path):
    """Read a figure-input CSV and validate it against its schema.

    Parameters
    ----------
    path : str
        Path to a file whose base name must be one of the known schemas.

    Returns
    -------
    list of dict
        One dict per data row with typed values (missing optional floats
        become None).

    Raises
    ------
    InputError
        If the file is missing, empty, has the wrong header, or holds an
        unparseable cell; the message names the file and the column.
    """
    name = os.path.basename(path)
    if name not in SCHEMAS:
        raise InputError("%s: no schema registered for this file name" % path)
    schema = SCHEMAS[name]
    if not os.path.exists(path):
        raise InputError("%s: file not found" % path)
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise InputError("%s: file is empty" % path)
        expected = list(schema)
        if header != expected:
            missing = [c for c in expected if c not in header]
            extra = [c for c in header if c not in expected]
            detail = missing[0] if missing else extra[0]
            raise InputError(
                "%s: bad header, offending column '%s' (expected %s)"
                % (path, detail, ",".join(expected))
            )
        rows = []
        for lineno, record in enumerate(reader, start=2):
            if len(record) != len(expected):
                raise InputError(
                    "%s: line %d has %d fields, expected %d"
                    % (path, lineno, len(record), len(expected))
                )
            row = {}
            for column, raw in zip(expected, record):
                row[column] = _convert(raw, schema[column], path, column, lineno)
            rows.append(row)
    if not rows:
        raise InputError("%s: no data rows" % path)
    return rows


def distinct(rows, column):
    """Ordered distinct values of one column across the rows."""
    seen = []
    for row in rows:
        value = row[column]
        if value not in seen:
            seen.append(value)
    return seen


def select(rows, **criteria):
    """Rows matching every column=value criterion."""
    return [r for r in rows if all(r[k] == v for k, v in criteria.items())]


METHOD_LABELS = {"vim": "iterative correction", "odm": "split operator"}
METHOD_STYLES = {"vim": "C0", "odm": "C1"}


def run_figure_script(family, render, argv=None):
    """Argparse front end shared by all figure scripts.

    Parameters
    ----------
    family : str
        The catalog family this script implements.
    render : callable
        ``render(spec, rows_by_input, out_path)`` drawing the figure.
    argv : list of str, optional
        Arguments; defaults to ``sys.argv[1:]``.

    Returns
    -------
    int
        0 on success, 2 on input or usage errors.
    """
    figures = sorted(f for f, s in CATALOG.items() if s.family == family)
    parser = argparse.ArgumentParser(
        description="Render figures: %s" % ", ".join(figures)
    )
    parser.add_argument("--figure", required=True, choices=figures)
    parser.add_argument(
        "--input-dir",
        required=True,
        help="directory containing the CSV artifacts for this figure",
    )
    parser.add_argument("--out", required=True, help="output image path")
    args = parser.parse_args(argv)

    spec = CATALOG[args.figure]
    try:
        rows_by_input = {
            name: load_csv(os.path.join(args.input_dir, name))
            for name in spec.inputs
        }
        render(spec, rows_by_input, args.out)
    except InputError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    print("wrote %s" % args.out)
    return 0


def new_figure(**kwargs):
    """Create a matplotlib figure with the non-interactive backend."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt.figure(**kwargs)


def save_figure(fig, out_path):
    """Write the figure deterministically (fixed metadata) and close it."""
    fig.savefig(out_path, dpi=150, metadata=_null_metadata(out_path))
    import matplotlib.pyplot as plt

    plt.close(fig)


def _null_metadata(out_path):
    # PNG writers embed a creation date by default; blank it so repeated
    # renders of the same data are byte-identical.
    if out_path.lower().endswith(".png"):
        return {"Software": None}
    return None
