"""Command-line entry point: render one figure from exported CSV data.

Rendering is a pure function of the input files: the matplotlib SVG hash
salt and the file metadata are pinned, so repeated runs produce
byte-identical output. The file is written atomically (temp file +
rename), so a failed render leaves no partial output.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "figplots"

import matplotlib.pyplot as plt

from .figures import RENDERERS
from .reader import SchemaError

_METADATA = {
    ".svg": {"Date": None},
    ".pdf": {"CreationDate": None},
    ".png": {"Software": "figplots"},
}


def render(figure: int, data_dir: str, out_path: str) -> None:
    """Render figure `figure` from `data_dir` CSVs into `out_path`."""
    if figure not in RENDERERS:
        raise SchemaError(f"unknown figure id {figure}; expected one of "
                          f"{sorted(RENDERERS)}")
    fig = RENDERERS[figure](data_dir)
    ext = os.path.splitext(out_path)[1].lower() or ".svg"
    fd, tmp = tempfile.mkstemp(suffix=ext, dir=os.path.dirname(os.path.abspath(out_path)))
    os.close(fd)
    try:
        fig.savefig(tmp, format=ext.lstrip("."), metadata=_METADATA.get(ext))
        os.replace(tmp, out_path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    finally:
        plt.close(fig)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="figplot", description="Render publication-style figures from CSV exports."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sp = sub.add_parser("render", help="render one figure")
    sp.add_argument("--figure", type=int, required=True, choices=sorted(RENDERERS))
    sp.add_argument("--data", required=True, help="directory holding the CSV exports")
    sp.add_argument("--out", required=True, help="output file (.svg, .pdf or .png)")
    args = parser.parse_args(argv)
    try:
        render(args.figure, args.data, args.out)
    except (SchemaError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
