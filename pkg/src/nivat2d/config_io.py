"""Text and JSON file formats for configurations.

Text format, one header per line (``#`` starts a comment)::

    alphabet: 0 1
    kind: periodic            # periodic | window | wordlift | substitution
    size: 2 2
    grid:
    0 1
    1 0

Grid lines are listed bottom-up: the first line is y = 0.  Windows may add
``origin: x y``.  Word lifts use ``word:`` and ``rule: x|y|x+y`` (or
``form: a b`` for eta(x, y) = word[a*x + b*y]).  Substitutions give one
``block: <symbol>`` stanza of m rows per symbol, then ``seed:`` and
``iterations:``; their grid is regenerated rather than stored.

The JSON mirror uses the same field names, with ``grid`` and ``blocks`` as
nested lists of tokens.
"""
from __future__ import annotations

import json
from pathlib import Path

from .configuration import LIFT_RULES, Configuration, Periodic, Substitution, Window, WordLift

KINDS = ("periodic", "window", "wordlift", "substitution")


class ConfigFormatError(ValueError):
    pass


def _grid_tokens(eta) -> list[list[str]]:
    syms = eta.alphabet.symbols
    return [[syms[c] for c in row] for row in eta.rows]


def to_dict(eta: Configuration) -> dict:
    syms = list(eta.alphabet.symbols)
    if isinstance(eta, Substitution):
        return {"alphabet": syms, "kind": "substitution",
                "blocks": {syms[i]: [[syms[c] for c in r] for r in b] for i, b in enumerate(eta.blocks)},
                "seed": syms[eta.seed], "iterations": eta.iterations}
    if isinstance(eta, Periodic):
        return {"alphabet": syms, "kind": "periodic", "size": [eta.width, eta.height], "grid": _grid_tokens(eta)}
    if isinstance(eta, Window):
        d = {"alphabet": syms, "kind": "window", "size": [eta.width, eta.height]}
        if tuple(eta.origin) != (0, 0):
            d["origin"] = list(eta.origin)
        d["grid"] = _grid_tokens(eta)
        return d
    if isinstance(eta, WordLift):
        d = {"alphabet": syms, "kind": "wordlift", "word": [syms[c] for c in eta.word]}
        if eta.rule is not None:
            d["rule"] = eta.rule
        else:
            d["form"] = list(eta.form)
        return d
    raise ConfigFormatError(f"cannot serialize a {eta.kind} configuration")


def from_dict(d: dict) -> Configuration:
    try:
        alphabet = tuple(str(s) for s in d["alphabet"])
        kind = d["kind"]
    except KeyError as e:
        raise ConfigFormatError(f"missing field {e.args[0]!r}") from None
    if kind not in KINDS:
        raise ConfigFormatError(f"unknown kind {kind!r}")
    index = {s: i for i, s in enumerate(alphabet)}

    def enc(tokens, where):
        try:
            return tuple(index[str(t)] for t in tokens)
        except KeyError as e:
            raise ConfigFormatError(f"{where}: symbol {e.args[0]!r} not in alphabet") from None

    if kind in ("periodic", "window"):
        grid = d.get("grid")
        if not grid:
            raise ConfigFormatError("missing field 'grid'")
        rows = tuple(enc(r, f"grid row {i}") for i, r in enumerate(grid))
        if "size" in d:
            w, h = d["size"]
            if h != len(rows) or any(len(r) != w for r in rows):
                raise ConfigFormatError(f"grid does not match size {w} x {h}")
        if kind == "periodic":
            return Periodic(alphabet, rows)
        return Window(alphabet, rows, tuple(d.get("origin", (0, 0))))
    if kind == "wordlift":
        word = enc(d.get("word", ()), "word")
        if "form" in d:
            return WordLift(alphabet, word, tuple(d["form"]))
        rule = d.get("rule", "x")
        if rule not in LIFT_RULES:
            raise ConfigFormatError(f"unknown lift rule {rule!r}")
        return WordLift(alphabet, word, LIFT_RULES[rule])
    blocks = d.get("blocks")
    if not isinstance(blocks, dict):
        raise ConfigFormatError("missing field 'blocks'")
    missing = [s for s in alphabet if s not in blocks]
    if missing:
        raise ConfigFormatError(f"rule missing a block for symbol {missing[0]!r}")
    coded = tuple(tuple(enc(r, f"block {s}") for r in blocks[s]) for s in alphabet)
    seed = enc([d.get("seed", alphabet[0])], "seed")[0]
    return Substitution.from_blocks(alphabet, coded, seed, int(d.get("iterations", 0)))


# ------------------------------------------------------------ text format

def dumps(eta: Configuration) -> str:
    d = to_dict(eta)
    out = [f"alphabet: {' '.join(d['alphabet'])}", f"kind: {d['kind']}"]
    if d["kind"] == "substitution":
        for sym, rows in d["blocks"].items():
            out.append(f"block: {sym}")
            out.extend(" ".join(r) for r in rows)
        out.append(f"seed: {d['seed']}")
        out.append(f"iterations: {d['iterations']}")
    elif d["kind"] == "wordlift":
        out.append(f"word: {' '.join(d['word'])}")
        if "rule" in d:
            out.append(f"rule: {d['rule']}")
        else:
            out.append(f"form: {d['form'][0]} {d['form'][1]}")
    else:
        out.append(f"size: {d['size'][0]} {d['size'][1]}")
        if "origin" in d:
            out.append(f"origin: {d['origin'][0]} {d['origin'][1]}")
        out.append("grid:")
        out.extend(" ".join(r) for r in d["grid"])
    return "\n".join(out) + "\n"


def _ints(value: str, n: int, key: str, lineno: int) -> list[int]:
    toks = value.split()
    try:
        vals = [int(t) for t in toks]
    except ValueError:
        raise ConfigFormatError(f"line {lineno}: {key} expects {n} integers, got {value!r}") from None
    if len(vals) != n:
        raise ConfigFormatError(f"line {lineno}: {key} expects {n} integers, got {value!r}")
    return vals


def loads(text: str) -> Configuration:
    d: dict = {}
    section = None          # "grid" or ("block", symbol)
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        if sep and key.strip() in ("alphabet", "kind", "size", "origin", "word", "rule", "form",
                                   "seed", "iterations", "grid", "block"):
            key, value = key.strip(), value.strip()
            section = None
            if key == "alphabet":
                d["alphabet"] = value.split()
            elif key == "kind":
                d["kind"] = value
            elif key in ("size", "origin", "form"):
                d[key] = _ints(value, 2, key, lineno)
            elif key == "word":
                d["word"] = value.split()
            elif key in ("rule", "seed"):
                d[key] = value
            elif key == "iterations":
                d["iterations"] = _ints(value, 1, key, lineno)[0]
            elif key == "grid":
                d["grid"] = []
                section = "grid"
            elif key == "block":
                d.setdefault("blocks", {})[value] = []
                section = ("block", value)
            continue
        if section == "grid":
            d["grid"].append(line.split())
        elif section is not None:
            d["blocks"][section[1]].append(line.split())
        else:
            raise ConfigFormatError(f"line {lineno}: unexpected token {line.split()[0]!r}")
    return from_dict(d)


def load(path) -> Configuration:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".json":
        try:
            return from_dict(json.loads(text))
        except json.JSONDecodeError as e:
            raise ConfigFormatError(f"{path}: {e}") from None
    return loads(text)


def dump_json(eta: Configuration) -> str:
    return json.dumps(to_dict(eta), indent=2) + "\n"


def save(eta: Configuration, path) -> None:
    path = Path(path)
    path.write_text(dump_json(eta) if path.suffix == ".json" else dumps(eta), encoding="utf-8")
