# coding: utf-8
"""
Output files of the experiments. Files are first written to a temporary file in the destination
directory and then renamed, so that a reader never sees a partially written file.
"""
import csv
import io
import json
import logging
import os
import tempfile

from monty.json import MontyEncoder
from monty.os import makedirs_p

from sparseia.core.errors import DataFileError


logger = logging.getLogger(__name__)

METRICS_HEADER = ["round", "accuracy", "loss", "total_bits", "max_hop_nnz"]


def prepare_output_dir(path):
    """Creates the output directory if needed and checks that it is writable."""
    try:
        makedirs_p(path)
    except OSError as exc:
        raise DataFileError("Cannot create the output directory {}: {}".format(path, exc))
    if not os.access(path, os.W_OK):
        raise DataFileError("Output directory {} is not writable".format(path))
    return path


def atomic_write(path, text):
    """Writes text to path through a temporary file renamed on completion."""
    directory = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp_", suffix=os.path.basename(path))
        try:
            with io.open(fd, "wt", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
            os.replace(tmp_path, path)
        except BaseException:
            if os.path.exists(tmp_path):
                os.remove(tmp_path)
            raise
    except OSError as exc:
        raise DataFileError("Cannot write {}: {}".format(path, exc))
    logger.debug("Written {}".format(path))
    return path


def format_value(value):
    """Floats are written with repr, which round-trips exactly."""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def csv_string(header, rows):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buffer.getvalue()


def write_csv(path, header, rows):
    return atomic_write(path, csv_string(header, rows))


def read_csv(path):
    """Rows of a CSV file as a list of dicts."""
    with io.open(path, "rt", encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))


def metrics_rows(metrics):
    return [[m.round_index, float(m.accuracy), float(m.loss), int(m.total_bits), int(m.max_hop_nnz)]
            for m in metrics]


def write_metrics_csv(path, metrics):
    """One row per round: round, test accuracy, test loss, bits transmitted in the round, max nnz of a hop."""
    return write_csv(path, METRICS_HEADER, metrics_rows(metrics))


def write_json(path, obj):
    return atomic_write(path, json.dumps(obj, cls=MontyEncoder, indent=2) + "\n")
