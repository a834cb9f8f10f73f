"""Line-oriented instance files and the random instance generator.

Format (one directive per line, blank lines ignored):

    csg 1
    n 4
    e 0 1
    e 1 2
    game table 3 7 1 ... (2^n - 1 integers, indexed by coalition bitmask)
    root 2

or, instead of the table line:

    game supersub w 3 0 2 5 k 2 seed 17

Values are integers. Tabulated instances are limited to n <= 20; the
compact supersub form goes up to the solver-wide cap of 63 agents.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .games import Game, make_supersub_game
from .graph import Graph

_TABLE_MAX_N = 20
_MAX_N = 63
_GNP_RETRIES = 1000

MODELS = ("path", "cycle", "star", "complete", "gnp")


class InstanceFormatError(ValueError):
    """Malformed or semantically invalid instance text."""


@dataclass(frozen=True)
class InstanceFile:
    n: int
    edges: tuple[tuple[int, int], ...]
    game_kind: str                       # "table" | "supersub"
    table: tuple[int, ...] | None = None
    weights: tuple[int, ...] | None = None
    kappa: int | None = None
    seed: int | None = None
    root: int | None = None


def _int_token(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise InstanceFormatError(
            f"line {lineno}: {what} {tok!r} is not an integer") from None


def parse_instance_text(text: str) -> InstanceFile:
    """Parse instance text into its file-level form, without realizing the
    game or graph. Raises InstanceFormatError with the offending line."""
    n = None
    edges: list[tuple[int, int]] = []
    game_kind = None
    table = None
    weights = None
    kappa = None
    seed = None
    root = None
    saw_header = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        toks = line.split()
        key = toks[0]
        if not saw_header:
            if toks != ["csg", "1"]:
                raise InstanceFormatError(
                    f"line {lineno}: expected header 'csg 1', got {line!r}")
            saw_header = True
            continue
        if key == "n":
            if n is not None:
                raise InstanceFormatError(f"line {lineno}: duplicate n")
            if len(toks) != 2:
                raise InstanceFormatError(
                    f"line {lineno}: n takes one integer")
            n = _int_token(toks[1], lineno, "agent count")
            if not 1 <= n <= _MAX_N:
                raise InstanceFormatError(
                    f"line {lineno}: n must be in 1..{_MAX_N}, got {n}")
        elif key == "e":
            if n is None:
                raise InstanceFormatError(
                    f"line {lineno}: edge before n is declared")
            if len(toks) != 3:
                raise InstanceFormatError(
                    f"line {lineno}: edge takes two endpoints")
            i = _int_token(toks[1], lineno, "edge endpoint")
            j = _int_token(toks[2], lineno, "edge endpoint")
            if not (0 <= i < n and 0 <= j < n):
                raise InstanceFormatError(
                    f"line {lineno}: edge ({i}, {j}) out of range for n={n}")
            if i == j:
                raise InstanceFormatError(
                    f"line {lineno}: edge ({i}, {j}) is a self-loop")
            edges.append((i, j))
        elif key == "game":
            if game_kind is not None:
                raise InstanceFormatError(f"line {lineno}: duplicate game")
            if n is None:
                raise InstanceFormatError(
                    f"line {lineno}: game before n is declared")
            if len(toks) < 2:
                raise InstanceFormatError(f"line {lineno}: game needs a kind")
            game_kind = toks[1]
            if game_kind == "table":
                if n > _TABLE_MAX_N:
                    raise InstanceFormatError(
                        f"line {lineno}: table games are capped at "
                        f"n <= {_TABLE_MAX_N}, got n={n}")
                vals = [_int_token(t, lineno, "table value")
                        for t in toks[2:]]
                want = (1 << n) - 1
                if len(vals) != want:
                    raise InstanceFormatError(
                        f"line {lineno}: table needs {want} values for "
                        f"n={n}, got {len(vals)}")
                table = tuple(vals)
            elif game_kind == "supersub":
                rest = toks[2:]
                if not rest or rest[0] != "w":
                    raise InstanceFormatError(
                        f"line {lineno}: supersub game starts with 'w'")
                if len(rest) < n + 3 or rest[n + 1] != "k":
                    raise InstanceFormatError(
                        f"line {lineno}: supersub game needs {n} weights "
                        f"then 'k <kappa>'")
                weights = tuple(_int_token(t, lineno, "weight")
                                for t in rest[1:n + 1])
                kappa = _int_token(rest[n + 2], lineno, "kappa")
                tail = rest[n + 3:]
                if tail:
                    if len(tail) != 2 or tail[0] != "seed":
                        raise InstanceFormatError(
                            f"line {lineno}: unexpected trailing tokens "
                            f"{' '.join(tail)!r}")
                    seed = _int_token(tail[1], lineno, "seed")
                if any(w < 0 for w in weights) or kappa < 0:
                    raise InstanceFormatError(
                        f"line {lineno}: weights and kappa must be "
                        f"nonnegative")
            else:
                raise InstanceFormatError(
                    f"line {lineno}: unknown game kind {game_kind!r}")
        elif key == "root":
            if root is not None:
                raise InstanceFormatError(f"line {lineno}: duplicate root")
            if n is None:
                raise InstanceFormatError(
                    f"line {lineno}: root before n is declared")
            if len(toks) != 2:
                raise InstanceFormatError(
                    f"line {lineno}: root takes one integer")
            root = _int_token(toks[1], lineno, "root")
            if not 0 <= root < n:
                raise InstanceFormatError(
                    f"line {lineno}: root {root} out of range for n={n}")
        else:
            raise InstanceFormatError(
                f"line {lineno}: unknown directive {key!r}")

    if not saw_header:
        raise InstanceFormatError("line 1: missing 'csg 1' header")
    if n is None:
        raise InstanceFormatError("missing n declaration")
    if game_kind is None:
        raise InstanceFormatError("missing game declaration")
    return InstanceFile(n=n, edges=tuple(edges), game_kind=game_kind,
                        table=table, weights=weights, kappa=kappa,
                        seed=seed, root=root)


def write_instance(inst: InstanceFile) -> str:
    lines = ["csg 1", f"n {inst.n}"]
    for i, j in inst.edges:
        lines.append(f"e {i} {j}")
    if inst.game_kind == "table":
        lines.append("game table " + " ".join(str(x) for x in inst.table))
    elif inst.game_kind == "supersub":
        line = ("game supersub w " + " ".join(str(w) for w in inst.weights)
                + f" k {inst.kappa}")
        if inst.seed is not None:
            line += f" seed {inst.seed}"
        lines.append(line)
    else:
        raise ValueError(f"unknown game kind {inst.game_kind!r}")
    if inst.root is not None:
        lines.append(f"root {inst.root}")
    return "\n".join(lines) + "\n"


def realize_instance(inst: InstanceFile) -> tuple[Game, Graph, int | None]:
    """Build the Game and Graph an InstanceFile describes.

    Tabulated games get the synthetic split attached so the pruning bounds
    are usable on them as well.
    """
    g = Graph(inst.n, inst.edges)
    if inst.game_kind == "table":
        game = Game.from_table((0,) + inst.table, decompose=True)
    elif inst.game_kind == "supersub":
        game = make_supersub_game(inst.n, weights=inst.weights,
                                  kappa=inst.kappa)
    else:
        raise ValueError(f"unknown game kind {inst.game_kind!r}")
    return game, g, inst.root


def parse_instance(text: str) -> tuple[Game, Graph, int | None]:
    return realize_instance(parse_instance_text(text))


def model_edges(model: str, n: int, *, p: float = 0.5,
                rng: random.Random | None = None) -> tuple[tuple[int, int], ...]:
    """Edge list for a named graph model. gnp retries until connected."""
    if model == "path":
        return tuple((i, i + 1) for i in range(n - 1))
    if model == "cycle":
        edges = [(i, i + 1) for i in range(n - 1)]
        if n > 2:
            edges.append((0, n - 1))
        return tuple(edges)
    if model == "star":
        return tuple((0, i) for i in range(1, n))
    if model == "complete":
        return tuple((i, j) for i in range(n) for j in range(i + 1, n))
    if model == "gnp":
        if rng is None:
            rng = random.Random()
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"edge probability must be in [0, 1], got {p}")
        for _ in range(_GNP_RETRIES):
            edges = tuple((i, j) for i in range(n) for j in range(i + 1, n)
                          if rng.random() < p)
            g = Graph(n, edges)
            if g.is_connected(g.full_mask):
                return edges
        raise ValueError(
            f"no connected graph sampled in {_GNP_RETRIES} tries for "
            f"n={n}, p={p}; raise p")
    raise ValueError(f"unknown model {model!r}")


def gen_instance(model: str, n: int, *, game_kind: str = "table",
                 seed: int | None = None, p: float = 0.5,
                 lo: int = 0, hi: int = 100,
                 root: int | None = None) -> InstanceFile:
    """Deterministic random instance for (model, n, seed)."""
    if not 1 <= n <= _MAX_N:
        raise ValueError(f"n must be in 1..{_MAX_N}, got {n}")
    rng = random.Random(seed)
    edges = model_edges(model, n, p=p, rng=rng)
    if game_kind == "table":
        if n > _TABLE_MAX_N:
            raise ValueError(
                f"table games are capped at n <= {_TABLE_MAX_N}; use "
                f"game_kind='supersub' for larger n")
        # The file format only records seeds for supersub games; the table
        # itself is the reproducible artifact here.
        table = tuple(rng.randint(lo, hi) for _ in range(1, 1 << n))
        return InstanceFile(n=n, edges=edges, game_kind="table", table=table,
                            root=root)
    if game_kind == "supersub":
        weights = tuple(rng.randint(0, 10) for _ in range(n))
        kappa = rng.randint(0, 5)
        return InstanceFile(n=n, edges=edges, game_kind="supersub",
                            weights=weights, kappa=kappa, seed=seed,
                            root=root)
    raise ValueError(f"unknown game kind {game_kind!r}")
