"""
Matrix IO - Binary and CSV files for correlation matrices and observation batches
"""
import csv
import logging
import os

import numpy as np

from channel.correlation import CorrelationMatrix, Provenance
from utils.errors import InvalidInputError

logger = logging.getLogger(__name__)

MAGIC = b"MMXE"
HEADER = np.dtype([("magic", "S4"), ("n_cols", "<u4"), ("flags", "<u4"), ("n_rows", "<u4")])
ENTRY = np.dtype("<c8")

# Provenance codes stored in the low byte of the flags word
PROVENANCE_CODES = {
    Provenance.SYNTHESIZED: 1,
    Provenance.ISO: 2,
    Provenance.LOS: 3,
    Provenance.ESTIMATED: 4,
}
CODE_PROVENANCE = {code: provenance for provenance, code in PROVENANCE_CODES.items()}


def _ensure_directory(path):
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)


def save_matrix(path, matrix, provenance=None):
    """
    Write a complex matrix in the binary layout

    The file is a 16-byte little-endian header (magic, n_cols, flags, n_rows)
    followed by the row-major complex64 entries. n_rows is 0 for a square
    matrix.

    Args:
        path (str): Output file
        matrix (CorrelationMatrix or numpy.ndarray): Matrix to store
        provenance (Provenance, optional): Overrides the provenance of a CorrelationMatrix
    """
    if isinstance(matrix, CorrelationMatrix):
        provenance = provenance or matrix.provenance
        entries = matrix.entries
    else:
        entries = np.asarray(matrix)
    if entries.ndim != 2:
        raise InvalidInputError(f"expected a 2-D matrix, got shape {entries.shape}")

    n_rows, n_cols = entries.shape
    header = np.zeros(1, dtype=HEADER)
    header["magic"] = MAGIC
    header["n_cols"] = n_cols
    header["flags"] = PROVENANCE_CODES.get(provenance, 0)
    header["n_rows"] = 0 if n_rows == n_cols else n_rows

    _ensure_directory(path)
    with open(path, "wb") as f:
        f.write(header.tobytes())
        f.write(np.ascontiguousarray(entries, dtype=ENTRY).tobytes())
    logger.debug("saved %dx%d matrix to %s", n_rows, n_cols, path)


def _read_binary(path):
    try:
        with open(path, "rb") as f:
            raw = f.read()
    except OSError as error:
        raise InvalidInputError(f"cannot read matrix file {path}: {error}") from error
    if len(raw) < HEADER.itemsize:
        raise InvalidInputError(f"{path} is too short for a matrix header")

    header = np.frombuffer(raw[:HEADER.itemsize], dtype=HEADER)[0]
    if bytes(header["magic"]) != MAGIC:
        raise InvalidInputError(f"{path} is not a matrix file (bad magic)")
    n_cols = int(header["n_cols"])
    n_rows = int(header["n_rows"]) or n_cols
    body = raw[HEADER.itemsize:]
    if len(body) != n_rows * n_cols * ENTRY.itemsize:
        raise InvalidInputError(f"{path} holds {len(body)} bytes of entries, expected a {n_rows}x{n_cols} matrix")
    entries = np.frombuffer(body, dtype=ENTRY).reshape(n_rows, n_cols).astype(complex)
    return entries, CODE_PROVENANCE.get(int(header["flags"]) & 0xFF)


def load_matrix(path):
    """
    Read a correlation matrix from the binary layout

    Stored entries are complex64, so loaded matrices match the saved ones to
    single precision. Files without a provenance code load as Estimated.

    Returns:
        CorrelationMatrix: Matrix with its stored provenance
    """
    entries, provenance = _read_binary(path)
    if entries.shape[0] != entries.shape[1]:
        raise InvalidInputError(f"{path} holds a {entries.shape[0]}x{entries.shape[1]} matrix, not a square one")
    # Single-precision rounding can push zero eigenvalues slightly negative, so no PSD check here
    return CorrelationMatrix(entries, provenance or Provenance.ESTIMATED, validate=False)


def save_matrix_csv(path, matrix):
    """
    Write a matrix as CSV rows (row, col, re, im), one per entry, 0-based indices

    Args:
        path (str): Output file
        matrix (CorrelationMatrix or numpy.ndarray): Matrix to store
    """
    entries = matrix.entries if isinstance(matrix, CorrelationMatrix) else np.asarray(matrix)
    _ensure_directory(path)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\r\n")
        writer.writerow(["row", "col", "re", "im"])
        for (row, col), value in np.ndenumerate(entries):
            writer.writerow([row, col, repr(float(np.real(value))), repr(float(np.imag(value)))])


def load_matrix_csv(path):
    """Read a matrix written by save_matrix_csv"""
    with open(path, newline="", encoding="utf-8") as f:
        records = list(csv.DictReader(f))
    if not records:
        raise InvalidInputError(f"{path} has no entries")
    rows = np.array([int(r["row"]) for r in records])
    cols = np.array([int(r["col"]) for r in records])
    entries = np.zeros((rows.max() + 1, cols.max() + 1), dtype=complex)
    entries[rows, cols] = [float(r["re"]) + 1j * float(r["im"]) for r in records]
    return entries


def load_observations(path, n=None):
    """
    Read an observation batch for offline covariance learning

    The batch is stored in the binary layout as an N x M matrix, one
    observation per column.

    Args:
        path (str): Input file
        n (int, optional): Expected number of antennas

    Returns:
        numpy.ndarray: N x M complex observations
    """
    entries, _ = _read_binary(path)
    if n is not None and entries.shape[0] != n:
        raise InvalidInputError(f"observations have {entries.shape[0]} rows, expected {n}")
    logger.info("loaded %d observations of length %d from %s", entries.shape[1], entries.shape[0], path)
    return entries
