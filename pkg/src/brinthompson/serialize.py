"""JSON file formats.

Table file::

    {"signature": [2, 2], "rows": [{"v": ["0", ""], "u": ["1", ""]}, ...]}

Generator file::

    {"name": "...", "signature": [2], "notes": "...",
     "generators": [{"name": "A", "rows": [...]}, ...]}

Embedding spec file::

    {"source": [2], "target": [2, 2], "map": {"0": 0}}
"""

from __future__ import annotations

import json
from pathlib import Path

from .analysis import GeneratorSet
from .clopen import Clopen
from .tables import Element, Table, TableSignatureMismatch, validate
from .words import AlphabetError, Signature, format_word, parse_word


class InputError(ValueError):
    """Malformed input file, with enough detail to locate the problem."""


def _words(values, sig: Signature, where: str):
    if not isinstance(values, list):
        raise InputError(f"{where}: expected a list of {sig.m} words, got {values!r}")
    if len(values) != sig.m:
        raise TableSignatureMismatch(
            f"{where}: {len(values)} words for a signature with {sig.m} coordinates")
    out = []
    for i, (w, k) in enumerate(zip(values, sig.sizes)):
        if not isinstance(w, str):
            raise InputError(f"{where}[{i}]: words are strings, got {w!r}")
        try:
            out.append(parse_word(w, k))
        except AlphabetError as exc:
            raise TableSignatureMismatch(f"{where}[{i}]: {exc}") from None
    return tuple(out)


def signature_from_json(obj, where: str = "signature") -> Signature:
    try:
        return Signature(tuple(int(k) for k in obj))
    except (TypeError, ValueError) as exc:
        raise InputError(f"{where}: {exc}") from None


def table_from_dict(d: dict, sig: Signature | None = None) -> Table:
    if sig is None:
        if "signature" not in d:
            raise InputError("table is missing 'signature'")
        sig = signature_from_json(d["signature"])
    rows = d.get("rows")
    if not isinstance(rows, list) or not rows:
        raise InputError("table needs a nonempty 'rows' list")
    parsed = []
    for n, row in enumerate(rows):
        if not isinstance(row, dict) or "v" not in row or "u" not in row:
            raise InputError(f"rows[{n}]: expected an object with 'v' and 'u'")
        parsed.append((_words(row["v"], sig, f"rows[{n}].v"), _words(row["u"], sig, f"rows[{n}].u")))
    return Table(sig, tuple(parsed))


def element_from_dict(d: dict, sig: Signature | None = None) -> Element:
    """Parse and validate; raises :class:`TableError` for invalid tables."""
    t = table_from_dict(d, sig)
    validate(t)
    return Element.from_table(t)


def table_to_dict(t: Table | Element) -> dict:
    sig = t.signature
    return {
        "signature": list(sig.sizes),
        "rows": [{"v": [format_word(w, k) for w, k in zip(v, sig.sizes)],
                  "u": [format_word(w, k) for w, k in zip(u, sig.sizes)]}
                 for v, u in t.rows],
    }


def generators_from_dict(d: dict) -> GeneratorSet:
    sig = signature_from_json(d.get("signature"))
    gens = d.get("generators")
    if not isinstance(gens, list) or not gens:
        raise InputError("generator file needs a nonempty 'generators' list")
    elements = []
    for n, g in enumerate(gens):
        try:
            elements.append(element_from_dict(g, sig))
        except InputError as exc:
            raise InputError(f"generators[{n}]: {exc}") from None
    return GeneratorSet(d.get("name", "unnamed"), elements, d.get("notes", ""))


def generators_to_dict(gs: GeneratorSet) -> dict:
    return {"name": gs.name, "signature": list(gs.signature.sizes), "notes": gs.notes,
            "generators": [{k: v for k, v in table_to_dict(g).items() if k != "signature"}
                           for g in gs.elements]}


def clopen_to_list(c: Clopen) -> list[list[str]]:
    return [[format_word(w, k) for w, k in zip(cyl, c.signature.sizes)] for cyl in c.cylinders]


def load_json(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


DATA_DIR = Path(__file__).parent / "data"


def data_file(name: str) -> Path:
    return DATA_DIR / name
