"""One result line per acceptance criterion, collected across the session."""

_results = {}


def record(n, ok, detail):
    _results[n] = (bool(ok), detail)
    print(format_line(n))


def format_line(n):
    ok, detail = _results[n]
    return f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})"


def lines():
    return [format_line(n) for n in sorted(_results)]
