import sys

import numpy as np


def diag(message, verbose=True):
    """Print a diagnostic line to stderr when verbose."""
    if verbose:
        print(message, file=sys.stderr)


def format_value(value, digits=12):
    """
    Human-readable rendering of report values.

    Example:
        format_value(1+2j) -> "1 + 2i"
        format_value(None) -> "N/A"
    """
    if value is None:
        return "N/A"
    if isinstance(value, (bool, np.bool_)):
        return "yes" if value else "no"
    if isinstance(value, (complex, np.complexfloating)):
        value = complex(value)
        sign = "-" if value.imag < 0 or (value.imag == 0 and np.signbit(value.imag)) else "+"
        return f"{value.real:.{digits}g} {sign} {abs(value.imag):.{digits}g}i"
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.{digits}g}"
    if isinstance(value, (tuple, list)):
        return ", ".join(format_value(v, digits) for v in value)
    return str(value)


def _rule(widths):
    return "+" + "+".join("-" * (w + 2) for w in widths) + "+"


def _row(cells, widths):
    return "|" + "|".join(f" {cell:<{w}} " for cell, w in zip(cells, widths)) + "|"


def table_lines(header, rows):
    """Box table as a list of lines; column widths follow the content."""
    cells = [[str(c) for c in header]] + [[str(c) for c in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
    lines = [_rule(widths), _row(cells[0], widths), _rule(widths)]
    lines += [_row(row, widths) for row in cells[1:]]
    lines.append(_rule(widths))
    return lines


def print_report(title, items, file=None):
    """
    Print a key/value report as a box table.

    Args:
        title (str): Heading printed above the table
        items (list or dict): (key, value) pairs
        file: Output stream, stdout by default

    Example:
        print_report("Radius", {"M": 2.0, "R0": 0.56})

        Radius:
        +-----+------+
        | Key | Value|
        ...
    """
    file = file or sys.stdout
    pairs = list(items.items()) if isinstance(items, dict) else list(items)
    print(f"\n{title}:", file=file)
    if not pairs:
        print("Nothing to report.", file=file)
        return
    for line in table_lines(("Quantity", "Value"), [(k, format_value(v)) for k, v in pairs]):
        print(line, file=file)


def print_coefficients(coeffs, file=None, title="Coefficients"):
    """Print power-series coefficients as an index / real / imaginary table."""
    file = file or sys.stdout
    print(f"\n{title}:", file=file)
    rows = [(n, f"{c.real:.17g}", f"{c.imag:.17g}") for n, c in enumerate(np.asarray(coeffs, dtype=complex))]
    for line in table_lines(("n", "re", "im"), rows):
        print(line, file=file)
