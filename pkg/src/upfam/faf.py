"""Reading and writing the text formats used by the command line.

A family document looks like

    faf 1
    kind fdfa
    alphabet a b
    leading
      states 1
      initial 0
      trans 0 a 0
      trans 0 b 0
    progress 0
      states 2
      initial 0
      accepting 1
      trans 0 a 1
      trans 0 b 0
      trans 1 a 1
      trans 1 b 0

with one ``progress <q>`` block per leading state.  Deterministic kinds
reject duplicate (state, symbol) transitions; ``fnfa`` blocks may repeat
them and may declare several start states with ``initials``.  Missing
transitions fall into an implicit rejecting sink, and machines are
renumbered in canonical breadth-first order on load (unreachable states are
dropped).  Lines starting with ``#`` are comments, as is anything after a
directive's arguments.  ``#`` and ``$`` are legal alphabet symbols; since
``#`` also opens comments, declare it as the last token of the
``alphabet`` line.

Dollar machines (plain DFAs) use the same directives under a ``dfa 1``
header; serialized Buchi automata use ``nba 1`` with ``initials``.  Sample
files carry one labeled pair per line, ``+<TAB>u<TAB>x`` or
``-<TAB>u<TAB>x``, with ``_`` for the empty word.
"""

from __future__ import annotations

from .automata import Dfa, Nfa, TransitionSystem
from .errors import InputError
from .family import FDFA, FDWA, FNFA, KINDS, Family
from .learning import Sample
from .words import Representation, format_word, parse_word

FAF_VERSION = "1"


def _fail(lineno, message):
    raise InputError("line %d: %s" % (lineno, message))


class _Reader:
    """Token rows of a document, comments and blank lines removed."""

    def __init__(self, text):
        self.rows = []
        for no, raw in enumerate(text.splitlines(), 1):
            tokens = raw.split()
            if tokens and not tokens[0].startswith("#"):
                self.rows.append((no, tokens))
        self.pos = 0
        self.last_line = self.rows[-1][0] if self.rows else 0

    def peek(self):
        if self.pos < len(self.rows):
            return self.rows[self.pos]
        return None

    def take(self):
        row = self.peek()
        if row is None:
            _fail(self.last_line + 1, "unexpected end of file")
        self.pos += 1
        return row


def _fixed_args(no, tokens, arity):
    """Arguments of a fixed-arity directive; trailing comments dropped."""
    args = tokens[1:]
    for k in range(arity, len(args)):
        if args[k].startswith("#"):
            args = args[:k]
            break
    if len(args) != arity:
        _fail(no, "'%s' takes %d argument(s), got %d"
              % (tokens[0], arity, len(args)))
    return args


def _int_args(no, tokens):
    """Arguments of an integer-variadic directive (accepting/initials)."""
    out = []
    for t in tokens[1:]:
        if t.startswith("#"):
            break
        try:
            out.append(int(t))
        except ValueError:
            _fail(no, "'%s' expects state numbers, got %r" % (tokens[0], t))
    return out


def _expect(reader, directive, arity):
    no, tokens = reader.take()
    if tokens[0] != directive:
        _fail(no, "expected '%s', got '%s'" % (directive, tokens[0]))
    return no, _fixed_args(no, tokens, arity)


def _parse_header(reader, document):
    no, args = _expect(reader, document, 1)
    if args[0] != FAF_VERSION:
        _fail(no, "unsupported %s version %r" % (document, args[0]))


def _parse_alphabet(reader):
    no, tokens = reader.take()
    if tokens[0] != "alphabet":
        _fail(no, "expected 'alphabet', got '%s'" % tokens[0])
    symbols = []
    rest = tokens[1:]
    for k, t in enumerate(rest):
        # '#' is a legal symbol, so only '#text' or a '#' with more tokens
        # after it starts a comment; declare the symbol as the last token.
        if t.startswith("#") and (len(t) > 1 or k + 1 < len(rest)):
            break
        symbols.append(t)
    if not symbols:
        _fail(no, "alphabet must list at least one symbol")
    if len(set(symbols)) != len(symbols):
        _fail(no, "duplicate symbol in alphabet")
    return tuple(symbols)


class _Block:
    """One machine section: states/init· /accepting/trans directives."""

    def __init__(self, n, header_line):
        self.n = n
        self.header_line = header_line
        self.initials = None
        self.accepting = None
        self.trans = []  # (lineno, source, symbol, target)

    def single_initial(self):
        if self.initials is None:
            return 0
        return self.initials[0]


def _parse_block(reader, alphabet, deterministic, header_line):
    no, args = _expect(reader, "states", 1)
    try:
        n = int(args[0])
    except ValueError:
        _fail(no, "'states' expects a number, got %r" % args[0])
    if n < 1:
        _fail(no, "a machine needs at least one state")
    block = _Block(n, header_line)
    seen_moves = set()
    while True:
        row = reader.peek()
        if row is None or row[1][0] in ("leading", "progress"):
            return block
        no, tokens = reader.take()
        word = tokens[0]
        if word == "initial":
            (arg,) = _fixed_args(no, tokens, 1)
            _set_initials(block, no, [arg])
        elif word == "initials":
            if deterministic:
                _fail(no, "'initials' is only allowed in fnfa blocks")
            _set_initials(block, no, _int_args(no, tokens))
        elif word == "accepting":
            if block.accepting is not None:
                _fail(no, "duplicate 'accepting' line")
            block.accepting = _int_args(no, tokens)
        elif word == "trans":
            s, sym, t = _fixed_args(no, tokens, 3)
            if sym not in alphabet:
                _fail(no, "transition on undeclared symbol %r" % sym)
            try:
                s, t = int(s), int(t)
            except ValueError:
                _fail(no, "transition states must be numbers")
            if not (0 <= s < n and 0 <= t < n):
                _fail(no, "transition %d-%s->%d out of range" % (s, sym, t))
            if deterministic:
                if (s, sym) in seen_moves:
                    _fail(no, "duplicate transition for state %d on %r"
                          % (s, sym))
                seen_moves.add((s, sym))
            block.trans.append((no, s, sym, t))
        else:
            _fail(no, "unknown directive '%s'" % word)


def _set_initials(block, no, raw):
    if block.initials is not None:
        _fail(no, "duplicate initial-state line")
    states = []
    for item in raw:
        try:
            states.append(int(item))
        except (TypeError, ValueError):
            _fail(no, "initial state must be a number, got %r" % (item,))
    if not states:
        _fail(no, "at least one initial state required")
    for q in states:
        if not 0 <= q < block.n:
            _fail(no, "initial state %d out of range" % q)
    block.initials = states


def parse_faf(text: str) -> Family:
    """Family from a FAF document; see the module docstring for the
    grammar."""
    reader = _Reader(text)
    _parse_header(reader, "faf")
    no, (kind,) = _expect(reader, "kind", 1)
    if kind not in KINDS:
        _fail(no, "kind must be one of %s, got %r" % ("/".join(KINDS), kind))
    alphabet = _parse_alphabet(reader)
    deterministic = kind != FNFA

    no, tokens = reader.take()
    if tokens[0] != "leading":
        _fail(no, "expected 'leading', got '%s'" % tokens[0])
    _fixed_args(no, tokens, 0)
    lead_block = _parse_block(reader, alphabet, True, no)
    if lead_block.accepting is not None:
        _fail(lead_block.header_line, "the leading block has no accepting"
              " states")

    blocks = {}
    while reader.peek() is not None:
        no, tokens = reader.take()
        if tokens[0] != "progress":
            _fail(no, "expected 'progress', got '%s'" % tokens[0])
        (q,) = _fixed_args(no, tokens, 1)
        try:
            q = int(q)
        except ValueError:
            _fail(no, "'progress' expects a leading state number")
        if not 0 <= q < lead_block.n:
            _fail(no, "progress block for unknown leading state %d" % q)
        if q in blocks:
            _fail(no, "duplicate progress block for leading state %d" % q)
        blocks[q] = _parse_block(reader, alphabet, deterministic, no)
    for q in range(lead_block.n):
        if q not in blocks:
            raise InputError(
                "missing progress block for leading state %d" % q)

    moves = {(s, sym): t for _no, s, sym, t in lead_block.trans}
    leading = TransitionSystem.from_parts(
        alphabet, lead_block.n, moves, lead_block.single_initial())
    progress = []
    for new_q in range(leading.n):
        old = leading.keys[new_q]
        if old is None:  # implicit leading sink: rejecting progress
            progress.append(_rejecting_progress(kind, alphabet))
        else:
            progress.append(_build_progress(kind, alphabet, blocks[old]))
    return Family(kind, leading, progress)


def _rejecting_progress(kind, alphabet):
    if kind == FNFA:
        return Nfa(alphabet, 1, {}, [0], [])
    return Dfa.from_parts(alphabet, 1, {}, 0, ())


def _build_progress(kind, alphabet, block):
    accepting = block.accepting or []
    for q in accepting:
        if not 0 <= q < block.n:
            _fail(block.header_line, "accepting state %d out of range" % q)
    if kind == FNFA:
        delta = {}
        for _no, s, sym, t in block.trans:
            delta.setdefault((s, sym), []).append(t)
        return Nfa(alphabet, block.n, delta,
                   block.initials if block.initials is not None else [0],
                   accepting).trim()
    moves = {(s, sym): t for _no, s, sym, t in block.trans}
    return Dfa.from_parts(alphabet, block.n, moves, block.single_initial(),
                          accepting)


# --------------------------------------------------------------- writing

def _machine_lines(out, machine, nondet):
    out.append("  states %d" % machine.n)
    if nondet:
        out.append("  initials %s" % " ".join(
            str(q) for q in sorted(machine.initials)))
    else:
        out.append("  initial %d" % machine.initial)
    accepting = getattr(machine, "accepting", None)
    if accepting:
        out.append("  accepting %s" % " ".join(
            str(q) for q in sorted(accepting)))
    for s in range(machine.n):
        for i, sym in enumerate(machine.alphabet):
            if nondet:
                for t in sorted(machine.delta[s][i]):
                    out.append("  trans %d %s %d" % (s, sym, t))
            else:
                out.append("  trans %d %s %d" % (s, sym, machine.delta[s][i]))


def serialize_faf(F: Family) -> str:
    out = ["faf " + FAF_VERSION, "kind " + F.kind,
           "alphabet " + " ".join(F.alphabet)]
    out.append("leading")
    _machine_lines(out, F.leading, nondet=False)
    for q, D in enumerate(F.progress):
        out.append("progress %d" % q)
        _machine_lines(out, D, nondet=F.kind == FNFA)
    return "\n".join(out) + "\n"


def parse_dfa_doc(text: str) -> Dfa:
    """A single DFA under a ``dfa 1`` header (used for dollar machines)."""
    reader = _Reader(text)
    _parse_header(reader, "dfa")
    alphabet = _parse_alphabet(reader)
    block = _parse_block(reader, alphabet, True, reader.last_line)
    if reader.peek() is not None:
        _fail(reader.peek()[0], "unexpected content after the machine")
    moves = {(s, sym): t for _no, s, sym, t in block.trans}
    return Dfa.from_parts(alphabet, block.n, moves, block.single_initial(),
                          block.accepting or [])


def serialize_dfa_doc(A: Dfa) -> str:
    out = ["dfa " + FAF_VERSION, "alphabet " + " ".join(A.alphabet)]
    _machine_lines(out, A, nondet=False)
    return "\n".join(out) + "\n"


def serialize_nba(A: Nfa) -> str:
    out = ["nba " + FAF_VERSION, "alphabet " + " ".join(A.alphabet)]
    _machine_lines(out, A, nondet=True)
    return "\n".join(out) + "\n"


# --------------------------------------------------------------- samples

def parse_sample(text: str) -> Sample:
    """Sample from tab-separated ``+/-<TAB>u<TAB>x`` lines, '_' for the
    empty word."""
    entries = []
    symbols = set()
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.rstrip("\r")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            _fail(no, "expected three tab-separated fields, got %d"
                  % len(parts))
        sign, u_text, x_text = parts
        if sign not in ("+", "-"):
            _fail(no, "label must be '+' or '-', got %r" % sign)
        entries.append((no, sign, u_text.strip(), x_text.strip()))
        for part in (u_text, x_text):
            if part.strip() not in ("", "_"):
                symbols.update(part.strip())
    alphabet = tuple(sorted(symbols))
    positive, negative = [], []
    for no, sign, u_text, x_text in entries:
        u = parse_word(u_text, alphabet)
        x = parse_word(x_text, alphabet)
        if not x:
            _fail(no, "the loop part of a pair must be nonempty")
        (positive if sign == "+" else negative).append(Representation(u, x))
    return Sample(positive, negative)


def serialize_sample(sample: Sample) -> str:
    out = []
    for sign, reps in (("+", sample.positive), ("-", sample.negative)):
        for r in reps:
            out.append("%s\t%s\t%s" % (sign, format_word(r.u) or "_",
                                       format_word(r.x)))
    return "\n".join(out) + ("\n" if out else "")


# --------------------------------------------------------------- graphviz

def _dot_machine(out, prefix, title, machine, nondet):
    out.append('  subgraph "cluster_%s" {' % prefix)
    out.append('    label="%s";' % title)
    accepting = getattr(machine, "accepting", frozenset())
    for s in range(machine.n):
        shape = "doublecircle" if s in accepting else "circle"
        out.append('    "%s%d" [label="%d", shape=%s];' % (prefix, s, s,
                                                           shape))
    initials = machine.initials if nondet else (machine.initial,)
    for k, q in enumerate(sorted(initials)):
        out.append('    "%s_in%d" [shape=point, style=invis];' % (prefix, k))
        out.append('    "%s_in%d" -> "%s%d";' % (prefix, k, prefix, q))
    edges = {}
    for s in range(machine.n):
        for i, sym in enumerate(machine.alphabet):
            targets = machine.delta[s][i] if nondet \
                else (machine.delta[s][i],)
            for t in targets:
                edges.setdefault((s, t), []).append(sym)
    for (s, t), syms in sorted(edges.items()):
        out.append('    "%s%d" -> "%s%d" [label="%s"];'
                   % (prefix, s, prefix, t, ",".join(syms)))
    out.append("  }")


def family_to_dot(F: Family) -> str:
    out = ["digraph family {", "  rankdir=LR;"]
    _dot_machine(out, "L", "leading", F.leading, nondet=False)
    for q, D in enumerate(F.progress):
        _dot_machine(out, "P%d_" % q, "progress %d" % q, D,
                     nondet=F.kind == FNFA)
    out.append("}")
    return "\n".join(out) + "\n"


def dfa_to_dot(A: Dfa) -> str:
    out = ["digraph machine {", "  rankdir=LR;"]
    _dot_machine(out, "S", "dfa", A, nondet=False)
    out.append("}")
    return "\n".join(out) + "\n"


def nba_to_dot(A: Nfa) -> str:
    out = ["digraph machine {", "  rankdir=LR;"]
    _dot_machine(out, "S", "nba", A, nondet=True)
    out.append("}")
    return "\n".join(out) + "\n"
