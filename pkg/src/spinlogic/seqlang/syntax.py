"""Pulse-sequence language: AST, parser and printer.

A file declares one spin system followed by any number of sequences::

    system {
      spin B "129Xe"
      spin A "1H"
      offset A 0 Hz
      J B A 100 Hz
    }
    sequence cnot {
      pulse A y 90
      delay 1/(2*J) refocus
      zpulse A -90
    }

Angles are in degrees and delays in seconds. Events run in file order.
Delay durations accept ``+ - * /`` arithmetic over numbers and ``J`` (the
only declared coupling) or ``J(A, B)``.
"""
import math
import re
from dataclasses import dataclass, field

from ..dynamics import SpinSystem
from ..errors import ParseError, UnknownSpinError


@dataclass(frozen=True)
class Pulse:
    target: str
    axis: str
    degrees: float
    pos: tuple = field(default=None, compare=False, repr=False)

    @property
    def radians(self):
        return math.radians(self.degrees)


@dataclass(frozen=True)
class ZComposite:
    """A z rotation written as a composite pulse; compiled natively unless expanded."""

    target: str
    degrees: float
    pos: tuple = field(default=None, compare=False, repr=False)

    @property
    def radians(self):
        return math.radians(self.degrees)


@dataclass(frozen=True)
class Delay:
    duration: float  # seconds
    refocus: bool = False
    pos: tuple = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Couple:
    """Direct coupling evolution by ``theta = pi J tau``, given in degrees."""

    a: str
    b: str
    degrees: float
    pos: tuple = field(default=None, compare=False, repr=False)

    @property
    def radians(self):
        return math.radians(self.degrees)


@dataclass(frozen=True)
class SequenceAST:
    name: str
    events: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))

    def __len__(self):
        return len(self.events)

    def __add__(self, other):
        return SequenceAST(self.name, self.events + other.events)


@dataclass(frozen=True)
class SystemDecl:
    spins: tuple  # (label, isotope)
    offsets_hz: tuple = ()  # (label, Hz)
    couplings_hz: tuple = ()  # (a, b, Hz)

    def to_spin_system(self, **kw):
        return SpinSystem.build(
            self.spins,
            offsets_hz=dict(self.offsets_hz),
            couplings_hz={(a, b): j for a, b, j in self.couplings_hz},
            **kw,
        )


@dataclass(frozen=True)
class Program:
    system: SystemDecl
    sequences: tuple = ()

    @property
    def spin_system(self):
        return self.system.to_spin_system()

    def sequence(self, name=None):
        if not self.sequences:
            raise KeyError("file declares no sequences")
        if name is None:
            return self.sequences[0]
        for seq in self.sequences:
            if seq.name == name:
                return seq
        raise KeyError(f"no sequence named {name!r}")


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<string>"[^"\n]*")
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[{}()*/+\-,])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text):
    tokens = []
    line, line_start, i = 1, 0, 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if m is None:
            raise ParseError(f"unexpected character {text[i]!r}", line, i - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, m.start() - line_start + 1))
        i = m.end()
    tokens.append(Token("eof", "", line, i - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0
        self.spins = []
        self.couplings = []

    @property
    def tok(self):
        return self.toks[self.i]

    def error(self, message, tok=None):
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.col)

    def next(self):
        tok = self.tok
        self.i += 1
        return tok

    def accept(self, text):
        if self.tok.text == text and self.tok.kind in ("ident", "punct"):
            return self.next()
        return None

    def expect(self, text):
        tok = self.accept(text)
        if tok is None:
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return tok

    def ident(self, what="identifier"):
        if self.tok.kind != "ident":
            raise self.error(f"expected {what}, found {self.tok.text or 'end of input'!r}")
        return self.next()

    def signed_number(self):
        sign = 1.0
        while self.tok.text in ("+", "-") and self.tok.kind == "punct":
            if self.next().text == "-":
                sign = -sign
        if self.tok.kind != "number":
            raise self.error(f"expected a number, found {self.tok.text or 'end of input'!r}")
        return sign * float(self.next().text)

    def spin_ref(self):
        tok = self.ident("spin label")
        if tok.text not in self.spins:
            raise self.error(f"unknown spin {tok.text!r}", tok)
        return tok.text

    # grammar

    def program(self):
        system = self.system()
        seqs = []
        names = set()
        while self.tok.kind != "eof":
            seq = self.sequence()
            if seq.name in names:
                raise self.error(f"duplicate sequence name {seq.name!r}")
            names.add(seq.name)
            seqs.append(seq)
        return Program(system, tuple(seqs))

    def system(self):
        self.expect("system")
        self.expect("{")
        spins, offsets = [], []
        while not self.accept("}"):
            tok = self.tok
            if self.accept("spin"):
                label = self.ident("spin label")
                if label.text in self.spins:
                    raise self.error(f"spin {label.text!r} declared twice", label)
                if self.tok.kind != "string":
                    raise self.error("expected quoted isotope name")
                isotope = self.next().text[1:-1]
                self.spins.append(label.text)
                spins.append((label.text, isotope))
            elif self.accept("offset"):
                label = self.spin_ref()
                value = self.signed_number()
                self.expect("Hz")
                offsets.append((label, value))
            elif self.accept("J"):
                a = self.spin_ref()
                b = self.spin_ref()
                if a == b:
                    raise self.error(f"spin {a!r} cannot couple to itself", tok)
                value = self.signed_number()
                self.expect("Hz")
                if any({a, b} == {x, y} for x, y, _ in self.couplings):
                    raise self.error(f"coupling {a}-{b} declared twice", tok)
                self.couplings.append((a, b, value))
            elif tok.kind == "eof":
                raise self.error("unterminated system block")
            else:
                raise self.error(f"unexpected {tok.text!r} in system block")
        if not spins:
            raise self.error("system declares no spins")
        decl = SystemDecl(tuple(spins), tuple(offsets), tuple(self.couplings))
        try:
            decl.to_spin_system()
        except (ValueError, UnknownSpinError) as exc:
            raise self.error(str(exc)) from exc
        return decl

    def sequence(self):
        self.expect("sequence")
        name = self.ident("sequence name").text
        self.expect("{")
        events = []
        while not self.accept("}"):
            if self.tok.kind == "eof":
                raise self.error(f"unterminated sequence {name!r}")
            events.append(self.event())
        return SequenceAST(name, tuple(events))

    def event(self):
        tok = self.tok
        pos = (tok.line, tok.col)
        if self.accept("pulse"):
            target = self.spin_ref()
            axis = self.ident("axis")
            if axis.text not in ("x", "y", "z"):
                raise self.error(f"axis must be x, y or z, found {axis.text!r}", axis)
            return Pulse(target, axis.text, self.signed_number(), pos)
        if self.accept("zpulse"):
            target = self.spin_ref()
            return ZComposite(target, self.signed_number(), pos)
        if self.accept("delay"):
            expr_tok = self.tok
            value = self.expr()
            if not math.isfinite(value) or value < 0:
                raise self.error(f"delay must be finite and non-negative, got {value}", expr_tok)
            refocus = self.accept("refocus") is not None
            return Delay(value, refocus, pos)
        if self.accept("couple"):
            a = self.spin_ref()
            b = self.spin_ref()
            if self._coupling(a, b) is None:
                raise self.error(f"no coupling declared between {a!r} and {b!r}", tok)
            return Couple(a, b, self.signed_number(), pos)
        raise self.error(f"unknown event {tok.text or 'end of input'!r}")

    def _coupling(self, a, b):
        for x, y, j in self.couplings:
            if {x, y} == {a, b}:
                return j
        return None

    def expr(self):
        value = self.term()
        while self.tok.text in ("+", "-") and self.tok.kind == "punct":
            if self.next().text == "+":
                value += self.term()
            else:
                value -= self.term()
        return value

    def term(self):
        value = self.factor()
        while self.tok.text in ("*", "/") and self.tok.kind == "punct":
            op = self.next()
            rhs = self.factor()
            if op.text == "*":
                value *= rhs
            elif rhs == 0:
                raise self.error("division by zero", op)
            else:
                value /= rhs
        return value

    def factor(self):
        tok = self.tok
        if tok.kind == "number":
            return float(self.next().text)
        if self.accept("-"):
            return -self.factor()
        if self.accept("+"):
            return self.factor()
        if self.accept("("):
            value = self.expr()
            self.expect(")")
            return value
        if self.accept("J"):
            if self.accept("("):
                a = self.spin_ref()
                self.expect(",")
                b = self.spin_ref()
                self.expect(")")
                j = self._coupling(a, b)
                if j is None:
                    raise self.error(f"delay needs coupling J({a},{b}) but none is declared", tok)
                return j
            if not self.couplings:
                raise self.error("delay needs a coupling J but none is declared", tok)
            if len(self.couplings) > 1:
                raise self.error("J is ambiguous with several couplings; write J(A, B)", tok)
            return self.couplings[0][2]
        raise self.error(f"expected an expression, found {tok.text or 'end of input'!r}")


def parse(text):
    """Parse a sequence file into a :class:`Program`."""
    return _Parser(text).program()


def parse_file(path):
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def _num(x):
    return repr(float(x))


def format_event(ev):
    if isinstance(ev, Pulse):
        return f"pulse {ev.target} {ev.axis} {_num(ev.degrees)}"
    if isinstance(ev, ZComposite):
        return f"zpulse {ev.target} {_num(ev.degrees)}"
    if isinstance(ev, Delay):
        return f"delay {_num(ev.duration)}" + (" refocus" if ev.refocus else "")
    if isinstance(ev, Couple):
        return f"couple {ev.a} {ev.b} {_num(ev.degrees)}"
    raise TypeError(f"not an event: {ev!r}")


def format_sequence(seq):
    body = "".join(f"  {format_event(ev)}\n" for ev in seq.events)
    return f"sequence {seq.name} {{\n{body}}}\n"


def format_program(program):
    lines = ["system {"]
    lines += [f'  spin {lab} "{iso}"' for lab, iso in program.system.spins]
    lines += [f"  offset {lab} {_num(hz)} Hz" for lab, hz in program.system.offsets_hz]
    lines += [f"  J {a} {b} {_num(j)} Hz" for a, b, j in program.system.couplings_hz]
    lines.append("}")
    out = "\n".join(lines) + "\n"
    for seq in program.sequences:
        out += "\n" + format_sequence(seq)
    return out
