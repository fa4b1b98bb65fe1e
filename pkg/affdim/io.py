"""
Logging setup and the plain-text file formats shared by the library and the CLI.
"""
# SPDX-License-Identifier: Apache-2.0.

import configparser
import csv
from enum import IntEnum
import logging
import math
from pathlib import Path
import sys
import threading
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from affdim.exceptions import DomainError


class LogLevel(IntEnum):
    NoLogs = 0  #:
    Fatal = 1  #:
    Error = 2  #:
    Warn = 3  #:
    Info = 4  #:
    Debug = 5  #:
    Trace = 6  #:


_TRACE = 5

_PY_LEVELS = {
    LogLevel.Fatal: logging.CRITICAL,
    LogLevel.Error: logging.ERROR,
    LogLevel.Warn: logging.WARNING,
    LogLevel.Info: logging.INFO,
    LogLevel.Debug: logging.DEBUG,
    LogLevel.Trace: _TRACE,
}

_logging_lock = threading.Lock()
_handler = None

logging.addLevelName(_TRACE, 'TRACE')


def init_logging(log_level, file_name):
    """Initialize logging in `affdim`.

    Calling again replaces the previous destination.

    Args:
        log_level (LogLevel): Display messages of this importance and higher.
            `LogLevel.NoLogs` will disable logging.
        file_name (str): Logging destination. To write to stdout or stderr pass
            'stdout' or 'stderr' as strings. Otherwise, a file path is assumed.
    """
    assert log_level is not None
    assert file_name is not None

    global _handler
    logger = logging.getLogger('affdim')
    with _logging_lock:
        if _handler is not None:
            logger.removeHandler(_handler)
            _handler.close()
            _handler = None

        if log_level == LogLevel.NoLogs:
            logger.setLevel(logging.CRITICAL + 1)
            logger.propagate = False
            return

        if file_name == 'stdout':
            handler = logging.StreamHandler(sys.stdout)
        elif file_name == 'stderr':
            handler = logging.StreamHandler(sys.stderr)
        else:
            handler = logging.FileHandler(file_name)
        handler.setFormatter(logging.Formatter('[%(levelname)s] [%(name)s] %(message)s'))

        logger.addHandler(handler)
        logger.setLevel(_PY_LEVELS[LogLevel(log_level)])
        logger.propagate = False
        _handler = handler


def format_float(value) -> str:
    """Format a real with 17 significant digits, enough to round-trip a double."""
    return '{:.17g}'.format(float(value))


def format_value(value: Any) -> str:
    if value is None:
        return 'none'
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, IntEnum):
        return value.name.lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    if isinstance(value, np.ndarray):
        return format_value(value.tolist())
    if isinstance(value, (list, tuple)):
        return ', '.join(format_value(v) for v in value)
    return str(value)


def parse_matrix(text: str, source: str = '<string>') -> np.ndarray:
    """Parse the matrix text format.

    The first non-empty line holds the order n, followed by n rows of n
    space-separated decimals.

    Args:
        text (str): File contents.
        source (str): Name used in error messages.

    Returns:
        numpy.ndarray: float64 array of shape (n, n).
    """
    lines = [line.strip() for line in text.splitlines() if line.strip() and not line.lstrip().startswith('#')]
    if not lines:
        raise DomainError('{}: empty matrix file'.format(source))
    try:
        order = int(lines[0])
    except ValueError:
        raise DomainError('{}: first line must be the matrix order, got {!r}'.format(source, lines[0]))
    if order < 1:
        raise DomainError('{}: matrix order must be positive'.format(source))
    rows = lines[1:]
    if len(rows) != order:
        raise DomainError('{}: expected {} rows, found {}'.format(source, order, len(rows)))

    entries = []
    for i, row in enumerate(rows):
        fields = row.split()
        if len(fields) != order:
            raise DomainError('{}: row {} has {} entries, expected {}'.format(source, i + 1, len(fields), order))
        try:
            entries.append([float(f) for f in fields])
        except ValueError:
            raise DomainError('{}: row {} is not numeric'.format(source, i + 1))

    matrix = np.array(entries, dtype=np.float64)
    if not np.all(np.isfinite(matrix)):
        raise DomainError('{}: matrix entries must be finite'.format(source))
    return matrix


def read_matrix(path) -> np.ndarray:
    """Read a square matrix from a file in the matrix text format."""
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise DomainError('cannot read matrix file {}: {}'.format(path, e.strerror))
    return parse_matrix(text, source=str(path))


def write_matrix(path, matrix):
    """Write a square matrix in the matrix text format."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    lines = [str(matrix.shape[0])]
    lines += [' '.join(format_float(v) for v in row) for row in matrix]
    Path(path).write_text('\n'.join(lines) + '\n')


def write_report(path, sections: Mapping[str, Mapping[str, Any]]):
    """Write a structured key-value report.

    Sections and keys keep insertion order; floats carry 17 significant
    digits so identical runs produce identical bytes.

    Args:
        path: Destination file.
        sections: Mapping of section name to a mapping of key to value.
    """
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    for section, values in sections.items():
        parser[section] = {key: format_value(value) for key, value in values.items()}
    with open(path, 'w', newline='\n') as f:
        parser.write(f)


def read_report(path) -> configparser.ConfigParser:
    """Read a report or config file written in the structured key-value format."""
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        with open(path) as f:
            parser.read_file(f)
    except OSError as e:
        raise DomainError('cannot read {}: {}'.format(path, e.strerror))
    except configparser.Error as e:
        raise DomainError('malformed structured file {}: {}'.format(path, e))
    return parser


def write_table(path, header: Sequence[str], rows: Iterable[Sequence[Any]]):
    """Write a CSV table, floats at 17 significant digits."""
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(v) for v in row])


def parse_float_list(text: str) -> list:
    """Parse a comma-separated list of reals, accepting simple fractions like '2/3'."""
    values = []
    for item in str(text).split(','):
        item = item.strip()
        if not item:
            continue
        try:
            if '/' in item:
                num, den = item.split('/', 1)
                values.append(float(num) / float(den))
            else:
                values.append(float(item))
        except (ValueError, ZeroDivisionError):
            raise DomainError('not a real number: {!r}'.format(item))
    if not all(math.isfinite(v) for v in values):
        raise DomainError('values must be finite: {!r}'.format(text))
    return values
