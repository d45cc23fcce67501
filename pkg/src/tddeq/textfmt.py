"""Line-oriented circuit text format.

Header lines declare the register and the wrapper; body lines are gates,
measurements, classically controlled gates and dispatches::

    qubits q q1 q2
    inputs q
    outputs q2
    init q1=0
    init q2=0
    gate H q2
    gate CX q2 q1
    measure q -> c0
    measure q1 -> c1
    dispatch c0, c1 { 0: skip 1: fix_x 2: fix_z 3: fix_zx }
    subcircuit fix_x {
      gate X q2
    }

Control expressions use bits, ``!``, ``&``, ``|``, ``^`` and parentheses;
``ifc <expr> apply NAME(params) q...`` guards one gate, with an optional
``== 0|1`` comparison.  A ``dispatch`` consumes the immediately preceding
``measure`` lines of the bits it mentions.
"""

from __future__ import annotations

import re

from .circuits import (Branch, CircuitSpec, CondGate, Conventional, Measure,
                       MeasureStep, flatten, gate, seq)
from .logic import BoolFunc


class ParseError(Exception):
    def __init__(self, msg, line=0, col=0):
        super().__init__(f"line {line}: {msg}" if line else msg)
        self.line = line
        self.col = col


# -- control expressions -------------------------------------------------------


_TOKEN = re.compile(r"\s*(=>|[()!&|^]|[A-Za-z_][A-Za-z_0-9]*|[01])")


def _tokenize(s: str):
    out, pos = [], 0
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m:
            raise ParseError(f"bad control expression near {s[pos:]!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


class _ExprParser:
    """exprs:  or := xor ('|' xor)*;  xor := and ('^' and)*;
    and := atom ('&' atom)*;  atom := '!' atom | '(' or ')' | bit | 0 | 1"""

    def __init__(self, tokens):
        self.toks = tokens
        self.pos = 0
        self.bits: list[str] = []

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self):
        t = self.peek()
        self.pos += 1
        return t

    def parse(self):
        node = self.or_()
        if self.peek() is not None:
            raise ParseError(f"trailing tokens in control expression: {self.peek()!r}")
        return node

    def or_(self):
        node = self.xor_()
        while self.peek() == "|":
            self.take()
            node = ("or", node, self.xor_())
        return node

    def xor_(self):
        node = self.and_()
        while self.peek() == "^":
            self.take()
            node = ("xor", node, self.and_())
        return node

    def and_(self):
        node = self.atom()
        while self.peek() == "&":
            self.take()
            node = ("and", node, self.atom())
        return node

    def atom(self):
        t = self.take()
        if t == "!":
            return ("not", self.atom())
        if t == "(":
            node = self.or_()
            if self.take() != ")":
                raise ParseError("missing closing parenthesis")
            return node
        if t in ("0", "1"):
            return ("const", int(t))
        if t is None or not re.match(r"[A-Za-z_]", t):
            raise ParseError(f"unexpected token {t!r} in control expression")
        if t not in self.bits:
            self.bits.append(t)
        return ("bit", t)


def _eval_node(node, env):
    op = node[0]
    if op == "bit":
        return env[node[1]]
    if op == "const":
        return node[1]
    if op == "not":
        return 1 - _eval_node(node[1], env)
    a = _eval_node(node[1], env)
    b = _eval_node(node[2], env)
    if op == "and":
        return a & b
    if op == "or":
        return a | b
    return a ^ b


def parse_expr(text: str, known_bits=None):
    """(bits-in-use, BoolFunc, normalized text) for one control expression."""
    p = _ExprParser(_tokenize(text))
    node = p.parse()
    bits = p.bits
    if known_bits is not None:
        for b in bits:
            if b not in known_bits:
                raise ParseError(f"control references unmeasured bit {b!r}")
    func = BoolFunc.from_callable(
        len(bits), 1,
        lambda vals: _eval_node(node, dict(zip(bits, vals))))
    return tuple(bits), func, _fmt_node(node)


def _fmt_node(node, prec=0):
    op = node[0]
    if op == "bit":
        return node[1]
    if op == "const":
        return str(node[1])
    if op == "not":
        return "!" + _fmt_node(node[1], 3)
    sym, mine = {"and": ("&", 3), "xor": ("^", 2), "or": ("|", 1)}[op]
    s = f"{_fmt_node(node[1], mine)}{sym}{_fmt_node(node[2], mine)}"
    return f"({s})" if mine < prec else s


def expr_from_func(bits, func: BoolFunc) -> str:
    """Canonical sum-of-minterms text for a control function."""
    terms = []
    for i in range(1 << func.arity):
        if not func.table[i]:
            continue
        lits = []
        for k, b in enumerate(bits):
            v = (i >> (func.arity - 1 - k)) & 1
            lits.append(b if v else f"!{b}")
        terms.append("&".join(lits) if lits else "1")
    if not terms:
        return "0"
    if len(terms) == len(func.table):
        return "1"
    return "|".join(f"({t})" if len(terms) > 1 and "&" in t else t for t in terms)


# -- gate line helpers ------------------------------------------------------------


_GATE_RE = re.compile(r"^([A-Za-z][A-Za-z0-9]*)(?:\(([^)]*)\))?$")


def _parse_gate_token(tok: str, qubits, line):
    m = _GATE_RE.match(tok)
    if not m:
        raise ParseError(f"bad gate token {tok!r}", line)
    name = m.group(1)
    params = []
    if m.group(2):
        try:
            params = [float(p) for p in m.group(2).split(",") if p.strip()]
        except ValueError:
            raise ParseError(f"bad gate parameters in {tok!r}", line)
    for q in qubits:
        pass
    try:
        return gate(name, qubits, params)
    except ValueError as exc:
        raise ParseError(str(exc), line)


def _fmt_gate(g) -> str:
    return f"{g.label()} {' '.join(g.qubits)}"


# -- parser ----------------------------------------------------------------------


def parse(text: str) -> CircuitSpec:
    """Parse circuit text; raises ParseError with the offending line number."""
    if not isinstance(text, str):
        try:
            text = bytes(text).decode("utf-8")
        except Exception as exc:
            raise ParseError(f"undecodable input: {exc}")
    lines = text.splitlines()
    subs: dict[str, list[tuple[int, str]]] = {}
    main: list[tuple[int, str]] = []
    current = None
    for no, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("subcircuit"):
            m = re.match(r"subcircuit\s+([A-Za-z_][\w]*)\s*\{\s*$", line)
            if not m:
                raise ParseError("bad subcircuit header", no)
            if current is not None:
                raise ParseError("nested subcircuit", no)
            current = m.group(1)
            if current in subs:
                raise ParseError(f"duplicate subcircuit {current!r}", no)
            subs[current] = []
            continue
        if line == "}":
            if current is None:
                raise ParseError("unmatched closing brace", no)
            current = None
            continue
        (subs[current] if current is not None else main).append((no, line))
    if current is not None:
        raise ParseError(f"unclosed subcircuit {current!r}")

    header = {"qubits": [], "inputs": [], "outputs": [], "outbits": []}
    init: dict[str, str] = {}
    body: list[tuple[int, str]] = []
    for no, line in main:
        head = line.split(None, 1)[0]
        if head in header:
            header[head] = line.split()[1:]
        elif head == "init":
            m = re.match(r"init\s+([\w]+)\s*=\s*([01+])\s*$", line)
            if not m:
                raise ParseError("bad init line (want `init q=0|1|+`)", no)
            init[m.group(1)] = m.group(2)
        else:
            body.append((no, line))
    qubits = tuple(header["qubits"])
    if not qubits:
        raise ParseError("missing `qubits` declaration")
    if len(set(qubits)) != len(qubits):
        raise ParseError("duplicate qubit in declaration")

    steps, measured = _parse_body(body, qubits, subs, set())
    return CircuitSpec(qubits=qubits, circuit=seq(*steps), fixed_init=init,
                       inputs=tuple(header["inputs"]),
                       outputs=tuple(header["outputs"]),
                       output_bits=tuple(header["outbits"]))


def _parse_body(body, qubits, subs, measured):
    steps = []
    pending_meas: list[tuple[str, str]] = []   # consecutive measure lines

    def flush_meas():
        for q, b in pending_meas:
            steps.append(Measure(MeasureStep((q,), (b,))))
        pending_meas.clear()

    for no, line in body:
        head = line.split(None, 1)[0]
        if head == "gate":
            flush_meas()
            toks = line.split()
            if len(toks) < 3:
                raise ParseError("gate line needs a gate and qubits", no)
            for q in toks[2:]:
                if q not in qubits:
                    raise ParseError(f"undeclared qubit {q!r}", no)
            steps.append(Conventional((_parse_gate_token(toks[1], toks[2:], no),)))
        elif head == "measure":
            m = re.match(r"measure\s+([\w]+)\s*->\s*([\w]+)\s*$", line)
            if not m:
                raise ParseError("bad measure line (want `measure q -> c`)", no)
            q, b = m.group(1), m.group(2)
            if q not in qubits:
                raise ParseError(f"undeclared qubit {q!r}", no)
            if b in measured:
                raise ParseError(f"bit {b!r} measured twice", no)
            measured.add(b)
            pending_meas.append((q, b))
        elif head == "ifc":
            m = re.match(r"ifc\s+(.+?)(?:\s*==\s*([01]))?\s+apply\s+(\S+)\s+(.+)$", line)
            if not m:
                raise ParseError("bad ifc line (want `ifc expr [== k] apply G q...`)", no)
            flush_meas()
            expr_text, cmp_val, gtok, qlist = m.groups()
            bits, func, norm = parse_expr(expr_text, measured)
            if not bits:
                raise ParseError("control expression uses no bits", no)
            if cmp_val == "0":
                func = BoolFunc(func.arity, 1, tuple(1 - v for v in func.table))
                norm = f"!({norm})"
            qs = qlist.split()
            for q in qs:
                if q not in qubits:
                    raise ParseError(f"undeclared qubit {q!r}", no)
            steps.append(CondGate(_parse_gate_token(gtok, qs, no), bits, func,
                                  expr=norm))
        elif head == "dispatch":
            m = re.match(r"dispatch\s+(.+?)\s*\{(.*)\}\s*$", line)
            if not m:
                raise ParseError("bad dispatch line", no)
            exprs_text, table_text = m.groups()
            exprs = [e.strip() for e in exprs_text.split(",") if e.strip()]
            if not exprs:
                raise ParseError("dispatch needs at least one expression", no)
            parsed = [parse_expr(e, measured) for e in exprs]
            used_bits: list[str] = []
            for bits, _, _ in parsed:
                for b in bits:
                    if b not in used_bits:
                        used_bits.append(b)
            pend_bits = [b for _, b in pending_meas]
            if set(used_bits) - set(pend_bits):
                raise ParseError("dispatch references bits without directly "
                                 "preceding measure lines", no)
            r_qubits = tuple(q for q, _ in pending_meas)
            r_bits = tuple(pend_bits)
            pending_meas.clear()
            t = len(parsed)
            branch_names = {}
            for item in re.findall(r"(\d+)\s*:\s*([A-Za-z_][\w]*)", table_text):
                branch_names[int(item[0])] = item[1]
            if sorted(branch_names) != list(range(1 << t)):
                raise ParseError(f"dispatch table must name branches 0..{(1 << t) - 1}", no)

            def f_all(vals):
                env = dict(zip(r_bits, vals))
                out = 0
                for bits, fn, _ in parsed:
                    out = (out << 1) | fn([env[b] for b in bits])
                return out

            func = BoolFunc.from_callable(len(r_bits), t, f_all)
            branches = []
            for i in range(1 << t):
                name = branch_names[i]
                if name not in subs:
                    raise ParseError(f"unknown subcircuit {name!r}", no)
                sub_steps, _ = _parse_body(subs[name], qubits, {}, set(measured))
                branches.append(seq(*sub_steps))
            steps.append(Branch(MeasureStep(r_qubits, r_bits), func,
                                tuple(branches),
                                exprs=tuple(norm for _, _, norm in parsed)))
        else:
            raise ParseError(f"unknown directive {head!r}", no)
    flush_meas()
    return steps, measured


# -- printer -----------------------------------------------------------------------


def print_spec(spec: CircuitSpec) -> str:
    """Canonical text of a spec; parse(print_spec(s)) reproduces s."""
    out = ["qubits " + " ".join(spec.qubits)]
    if spec.inputs:
        out.append("inputs " + " ".join(spec.inputs))
    if spec.outputs:
        out.append("outputs " + " ".join(spec.outputs))
    if spec.output_bits:
        out.append("outbits " + " ".join(spec.output_bits))
    for q in spec.qubits:
        if q in spec.fixed_init:
            out.append(f"init {q}={spec.fixed_init[q]}")
    subs: list[str] = []
    counter = [0]
    for st in flatten(spec.circuit):
        out.extend(_print_step(st, subs, counter))
    out.extend(subs)
    return "\n".join(out) + "\n"


def _print_step(st, subs, counter) -> list[str]:
    if isinstance(st, Conventional):
        return [f"gate {_fmt_gate(g)}" for g in st.gates]
    if isinstance(st, Measure):
        return [f"measure {q} -> {b}"
                for q, b in zip(st.step.qubits, st.step.bits)]
    if isinstance(st, CondGate):
        expr = st.expr or expr_from_func(st.bits, st.func)
        return [f"ifc {expr} apply {_fmt_gate(st.gate)}"]
    if isinstance(st, Branch):
        lines = [f"measure {q} -> {b}"
                 for q, b in zip(st.measure.qubits, st.measure.bits)]
        if st.exprs:
            exprs = list(st.exprs)
        else:
            exprs = [expr_from_func(st.measure.bits, st.func.output_bit(b))
                     for b in range(st.func.outputs)]
        names = []
        for i, body in enumerate(st.branches):
            name = f"sub{counter[0]}"
            counter[0] += 1
            names.append(name)
            block = [f"subcircuit {name} {{"]
            nested: list[str] = []
            for sub_st in flatten(body):
                for ln in _print_step(sub_st, nested, counter):
                    block.append("  " + ln)
            if nested:
                raise ValueError("nested dispatch inside a branch body is not printable")
            block.append("}")
            subs.extend(block)
        table = " ".join(f"{i}: {names[i]}" for i in range(len(names)))
        lines.append(f"dispatch {', '.join(exprs)} {{ {table} }}")
        return lines
    raise TypeError(f"not a printable step: {st!r}")
