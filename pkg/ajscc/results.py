"""Result tables and their file formats.

A table is a list of column names, rectangular rows of numbers and a block of
metadata.  Three renderings exist:

* csv: metadata as '# key: <json>' comment lines, then the header row, then
  the rows.  Floats are written with repr so that reading them back gives the
  identical number.
* json: one document following the TableDocument schema.
* text: space aligned columns for terminals (not read back).
"""

from __future__ import absolute_import, print_function

import csv
import io
import json
import os
import sys
import tempfile
from typing import Any, Dict, List, Optional, Sequence, Union

if sys.version_info[:2] < (3, 10):
    from typing_extensions import TypedDict
else:
    from typing import TypedDict

from ajscc.errors import AjsccError, SpecError

Number = Union[int, float]

FORMATS = ('csv', 'json', 'text')

# metadata keys, in the order they are written
METADATA_KEYS = ['kind', 'spec', 'seed', 'version', 'wall_time_s']

# Schema of a table written as json
TableDocument = TypedDict('TableDocument', {'metadata': Dict[str, Any],
                                            'columns': List[str],
                                            'rows': List[List[Number]]})


class ResultTable(object):
    def __init__(self, columns, rows=None, metadata=None):
        # type: (Sequence[str], Optional[List[List[Number]]], Optional[Dict[str, Any]]) -> None
        self.columns = list(columns)
        self.rows = []  # type: List[List[Number]]
        self.metadata = dict(metadata or {})  # type: Dict[str, Any]
        for row in rows or []:
            self.append(row)

    def append(self, row):
        # type: (Sequence[Number]) -> None
        if len(row) != len(self.columns):
            raise AjsccError('row of %d cells for %d columns' % (len(row), len(self.columns)))
        self.rows.append(list(row))

    def column(self, name):
        # type: (str) -> List[Number]
        i = self.columns.index(name)
        return [row[i] for row in self.rows]

    def __repr__(self):
        # type: () -> str
        return 'ResultTable(columns=%r, rows=%d)' % (self.columns, len(self.rows))


def _cell_text(value):
    # type: (Number) -> str
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_cell(text):
    # type: (str) -> Number
    try:
        return int(text)
    except ValueError:
        return float(text)


def _ordered_metadata(metadata):
    # type: (Dict[str, Any]) -> List[str]
    keys = [k for k in METADATA_KEYS if k in metadata]
    return keys + sorted(k for k in metadata if k not in METADATA_KEYS)


def render_csv(table):
    # type: (ResultTable) -> str
    out = io.StringIO()
    for key in _ordered_metadata(table.metadata):
        out.write('# %s: %s\n' % (key, json.dumps(table.metadata[key], sort_keys=True)))
    writer = csv.writer(out, lineterminator='\n')
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_cell_text(v) for v in row])
    return out.getvalue()


def render_json(table):
    # type: (ResultTable) -> str
    document = {
        'metadata': table.metadata,
        'columns': table.columns,
        'rows': table.rows,
    }  # type: TableDocument
    return json.dumps(document, sort_keys=True, indent=1) + '\n'


def render_text(table):
    # type: (ResultTable) -> str
    cells = [table.columns] + [['%.6g' % v if isinstance(v, float) else str(v) for v in row]
                               for row in table.rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(table.columns))]
    return ''.join('  '.join(c.rjust(w) for c, w in zip(row, widths)).rstrip() + '\n'
                   for row in cells)


def render(table, fmt):
    # type: (ResultTable, str) -> str
    if fmt == 'csv':
        return render_csv(table)
    if fmt == 'json':
        return render_json(table)
    if fmt == 'text':
        return render_text(table)
    raise SpecError('format', 'expected one of %s, got %r' % (', '.join(FORMATS), fmt))


def write_table(table, path, fmt):
    # type: (ResultTable, Optional[str], str) -> None
    """Write 'table' to 'path', or to standard output when 'path' is None.

    Files are replaced atomically, so a failed run never leaves a partial file.
    """
    text = render(table, fmt)
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    handle, temp = tempfile.mkstemp(prefix='.ajscc-', dir=directory)
    try:
        with io.open(handle, 'w', encoding='utf-8', newline='') as f:
            f.write(text)
        os.replace(temp, path)
    except BaseException:
        if os.path.exists(temp):
            os.remove(temp)
        raise


def parse_csv(text):
    # type: (str) -> ResultTable
    metadata = {}  # type: Dict[str, Any]
    lines = text.splitlines()
    body = 0
    for body, line in enumerate(lines):
        if not line.startswith('# '):
            break
        key, _, value = line[2:].partition(': ')
        metadata[key] = json.loads(value)
    reader = csv.reader(lines[body:])
    columns = next(reader)
    return ResultTable(columns, [[_parse_cell(c) for c in row] for row in reader if row],
                       metadata)


def parse_json(text):
    # type: (str) -> ResultTable
    document = json.loads(text)  # type: TableDocument
    return ResultTable(document['columns'], document['rows'], document['metadata'])


def read_table(path, fmt=None):
    # type: (str, Optional[str]) -> ResultTable
    """Read a csv or json table; the format defaults to the file extension."""
    if fmt is None:
        fmt = 'json' if path.endswith('.json') else 'csv'
    with io.open(path, encoding='utf-8') as f:
        text = f.read()
    if fmt == 'csv':
        return parse_csv(text)
    if fmt == 'json':
        return parse_json(text)
    raise SpecError('format', 'cannot read %r tables' % fmt)
