"""
Results Manager - Collects experiment rows and writes schema-versioned CSV
"""
import csv
import io
import logging
import os
import sys

import numpy as np

from utils.constants import CSV_SCHEMA_VERSION, TITLE
from utils.errors import InvalidInputError

logger = logging.getLogger(__name__)


def mean_and_stderr(values):
    """
    Sample mean and its standard error

    Args:
        values (array_like): Samples

    Returns:
        tuple: (mean, stderr); stderr is 0 for a single sample
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise InvalidInputError("no samples")
    if values.size == 1:
        return float(values[0]), 0.0
    return float(values.mean()), float(values.std(ddof=1) / np.sqrt(values.size))


class ResultsManager:
    """Rows of one experiment with a fixed column list"""

    def __init__(self, experiment, columns):
        """
        Initialize the results manager

        Args:
            experiment (str): Experiment name written into the CSV comment line
            columns (list): Column names in output order
        """
        self.experiment = experiment
        self.columns = list(columns)
        self.rows = []

    def addRow(self, **values):
        """
        Add one row

        Args:
            **values: One value per column
        """
        missing = set(self.columns) - set(values)
        extra = set(values) - set(self.columns)
        if missing or extra:
            raise InvalidInputError(f"row does not match columns (missing {sorted(missing)}, extra {sorted(extra)})")
        self.rows.append(values)

    def sortRows(self, *keys):
        """Sort rows by the given columns (all columns when none are given)"""
        keys = keys or tuple(self.columns)
        self.rows.sort(key=lambda row: tuple(_sort_key(row[k]) for k in keys))

    def column(self, name, **where):
        """Values of one column over the rows matching all where-conditions"""
        return [row[name] for row in self.rows if all(row[k] == v for k, v in where.items())]

    def toCsv(self):
        """
        Render the rows as CSV text

        Returns:
            str: Comment line, header row and data rows
        """
        buffer = io.StringIO()
        buffer.write(f"# {TITLE} {self.experiment} schema={CSV_SCHEMA_VERSION}\r\n")
        writer = csv.DictWriter(buffer, fieldnames=self.columns, lineterminator="\r\n")
        writer.writeheader()
        writer.writerows(self.rows)
        return buffer.getvalue()

    def write(self, path=None):
        """
        Write the CSV to a file, or to stdout when path is None

        Args:
            path (str, optional): Output file
        """
        text = self.toCsv()
        if path is None:
            sys.stdout.write(text)
            return
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, "w", newline="", encoding="utf-8") as f:
            f.write(text)
        logger.info("wrote %d %s rows to %s", len(self.rows), self.experiment, path)


def _sort_key(value):
    # Numbers before strings so mixed columns still sort deterministically
    if isinstance(value, (int, float, np.integer, np.floating)):
        return (0, float(value), "")
    return (1, 0.0, str(value))
