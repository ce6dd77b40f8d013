"""XCSP3-core XML emission and parsing for the compiled puzzle subset.

The emitter produces byte-deterministic documents (2-space indent, fixed
attribute order): one variable array when domains agree, hints as an
`instantiation` with ``class="hints"``, and runs of same-shaped constraints
folded into a `<group>` whose first child is the constraint template followed
by one `<args>` element per member.  Scopes matching whole rows, columns or
rectangular blocks use slice notation (``x[0][]``, ``x[][2]``,
``x[0..1][2..3]``).  The parser accepts exactly this subset and expands
slices back to explicit scopes.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from typing import Optional

from .csp import (
    AllDifferent,
    BinaryLess,
    Constraint,
    CspInstance,
    Instantiation,
    SumCompare,
    Table,
    Variable,
)


class XcspError(Exception):
    pass


class MixedDomainArray(XcspError):
    pass


class UnsupportedElement(XcspError):
    def __init__(self, name: str, detail: str = ""):
        msg = f"unsupported element: {name}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
        self.name = name


class MalformedSlice(XcspError):
    pass


class DomainParseError(XcspError):
    pass


# ---------------------------------------------------------------------------
# Emission


def emit_xcsp(instance: CspInstance, *, scalar_fallback: bool = False) -> str:
    """Serialize an instance; deterministic down to the byte."""
    lines = ['<instance format="XCSP3" type="CSP">', "  <variables>"]
    shape = instance.array_shape
    domains = {v.domain for v in instance.variables}
    if shape is not None and len(domains) == 1:
        rows, cols = shape
        domain_text = _domain_text(next(iter(domains)))
        lines.append(f'    <array id="x" size="[{rows}][{cols}]"> {domain_text} </array>')
    elif shape is not None and not scalar_fallback:
        raise MixedDomainArray("array shape set but variable domains differ")
    else:
        shape = None
        for v in instance.variables:
            lines.append(f'    <var id="{v.name}"> {_domain_text(v.domain)} </var>')
    lines.append("  </variables>")
    lines.append("  <constraints>")
    for chunk in _grouped(instance.constraints):
        if len(chunk) == 1:
            lines.extend(_emit_single(chunk[0], shape, instance))
        else:
            lines.extend(_emit_group(chunk, shape, instance))
    lines.append("  </constraints>")
    lines.append("</instance>")
    return "\n".join(lines) + "\n"


def _domain_text(domain: tuple[int, ...]) -> str:
    if len(domain) == 1:
        return str(domain[0])
    if domain[-1] - domain[0] + 1 == len(domain):
        return f"{domain[0]}..{domain[-1]}"
    return " ".join(str(v) for v in domain)


def _group_key(c: Constraint):
    """Constraints sharing a key can be folded under one group template."""
    if isinstance(c, AllDifferent):
        return ("allDifferent",)
    if isinstance(c, SumCompare):
        return ("sum", c.op, c.constant)
    if isinstance(c, BinaryLess):
        return ("intension", c.strict)
    if isinstance(c, Table):
        return ("extension", c.tuples)
    return None  # instantiations and anything else stay alone


def _grouped(constraints) -> list[list[Constraint]]:
    chunks: list[list[Constraint]] = []
    for c in constraints:
        key = _group_key(c)
        if chunks and key is not None and _group_key(chunks[-1][0]) == key:
            chunks[-1].append(c)
        else:
            chunks.append([c])
    return chunks


def _ref(shape: Optional[tuple[int, int]], instance: CspInstance, cell: int) -> str:
    if shape is None:
        return instance.variables[cell].name
    return f"x[{cell // shape[1]}][{cell % shape[1]}]"


def _scope_text(scope, shape, instance) -> str:
    if shape is not None:
        compact = _slice_for(scope, shape)
        if compact is not None:
            return compact
    return " ".join(_ref(shape, instance, c) for c in scope)


def _slice_for(scope, shape) -> Optional[str]:
    """Slice notation when the scope is exactly a row-major rectangle."""
    rows, cols = shape
    rs = [c // cols for c in scope]
    cs = [c % cols for c in scope]
    r0, r1 = min(rs), max(rs)
    c0, c1 = min(cs), max(cs)
    if (r1 - r0 + 1) * (c1 - c0 + 1) != len(scope):
        return None
    expansion = tuple(r * cols + c for r in range(r0, r1 + 1) for c in range(c0, c1 + 1))
    if expansion != tuple(scope):
        return None

    def part(lo, hi, n):
        if lo == 0 and hi == n - 1 and n > 1:
            return ""
        if lo == hi:
            return str(lo)
        return f"{lo}..{hi}"

    return f"x[{part(r0, r1, rows)}][{part(c0, c1, cols)}]"


def _tuples_text(tuples) -> str:
    return "".join("(" + ",".join(str(v) for v in t) + ")" for t in tuples)


def _emit_single(c: Constraint, shape, instance) -> list[str]:
    pad = "    "
    if isinstance(c, Instantiation):
        refs = " ".join(_ref(shape, instance, v) for v in c.vars)
        values = " ".join(str(v) for v in c.values)
        head = f'<instantiation class="{c.label}">' if c.label else "<instantiation>"
        return [
            pad + head,
            pad + f"  <list> {refs} </list>",
            pad + f"  <values> {values} </values>",
            pad + "</instantiation>",
        ]
    if isinstance(c, AllDifferent):
        return [pad + f"<allDifferent> {_scope_text(c.vars, shape, instance)} </allDifferent>"]
    if isinstance(c, SumCompare):
        return [
            pad + "<sum>",
            pad + f"  <list> {_scope_text(c.vars, shape, instance)} </list>",
            pad + f"  <condition> ({c.op},{c.constant}) </condition>",
            pad + "</sum>",
        ]
    if isinstance(c, BinaryLess):
        op = "lt" if c.strict else "le"
        a = _ref(shape, instance, c.x)
        b = _ref(shape, instance, c.y)
        return [pad + f"<intension> {op}({a},{b}) </intension>"]
    if isinstance(c, Table):
        return [
            pad + "<extension>",
            pad + f"  <list> {_scope_text(c.vars, shape, instance)} </list>",
            pad + f"  <supports> {_tuples_text(c.tuples)} </supports>",
            pad + "</extension>",
        ]
    raise UnsupportedElement(type(c).__name__, "cannot serialize")


def _emit_group(chunk, shape, instance) -> list[str]:
    pad = "    "
    first = chunk[0]
    lines = [pad + "<group>"]
    if isinstance(first, AllDifferent):
        lines.append(pad + "  <allDifferent> %... </allDifferent>")
    elif isinstance(first, SumCompare):
        lines.append(pad + "  <sum>")
        lines.append(pad + "    <list> %... </list>")
        lines.append(pad + f"    <condition> ({first.op},{first.constant}) </condition>")
        lines.append(pad + "  </sum>")
    elif isinstance(first, BinaryLess):
        op = "lt" if first.strict else "le"
        lines.append(pad + f"  <intension> {op}(%0,%1) </intension>")
    elif isinstance(first, Table):
        lines.append(pad + "  <extension>")
        lines.append(pad + "    <list> %... </list>")
        lines.append(pad + f"    <supports> {_tuples_text(first.tuples)} </supports>")
        lines.append(pad + "  </extension>")
    else:  # pragma: no cover - _group_key keeps others out
        raise UnsupportedElement(type(first).__name__, "cannot group")
    for c in chunk:
        scope = (c.x, c.y) if isinstance(c, BinaryLess) else c.vars
        lines.append(pad + f"  <args> {_scope_text(scope, shape, instance)} </args>")
    lines.append(pad + "</group>")
    return lines


# ---------------------------------------------------------------------------
# Parsing


_SIZE_RE = re.compile(r"\[(\d+)\]\[(\d+)\]\Z")
_REF_RE = re.compile(r"([A-Za-z_]\w*)\[([^\[\]]*)\]\[([^\[\]]*)\]\Z")
_INDEX_RE = re.compile(r"(\d+)(?:\.\.(\d+))?\Z")
_CONDITION_RE = re.compile(r"\(\s*(\w+)\s*,\s*(-?\d+)\s*\)\Z")
_INTENSION_RE = re.compile(r"(lt|le)\(\s*([^,()]+)\s*,\s*([^,()]+)\s*\)\Z")
_TUPLE_RE = re.compile(r"\(([^()]*)\)")
_DOMAIN_TOKEN_RE = re.compile(r"(-?\d+)(?:\.\.(-?\d+))?\Z")


def parse_xcsp(text: str) -> CspInstance:
    """Parse the emitted XCSP3 subset back into a CspInstance."""
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise XcspError(f"not well-formed XML: {exc}") from None
    if root.tag != "instance":
        raise UnsupportedElement(root.tag, "expected <instance>")
    variables_el = root.find("variables")
    constraints_el = root.find("constraints")
    if variables_el is None:
        raise UnsupportedElement("instance", "missing <variables>")
    for child in root:
        if child.tag not in ("variables", "constraints"):
            raise UnsupportedElement(child.tag)

    variables, shape, lookup = _parse_variables(variables_el)
    constraints: list[Constraint] = []
    if constraints_el is not None:
        for el in constraints_el:
            constraints.extend(_parse_constraint(el, lookup))
    return CspInstance(
        variables=tuple(variables),
        constraints=tuple(constraints),
        array_shape=shape,
    )


class _Lookup:
    """Resolve reference tokens (with slices) to variable-id tuples."""

    def __init__(self):
        self.array_id: Optional[str] = None
        self.shape: Optional[tuple[int, int]] = None
        self.scalars: dict[str, int] = {}

    def expand(self, token: str) -> list[int]:
        if token in self.scalars:
            return [self.scalars[token]]
        m = _REF_RE.match(token)
        if m is None:
            raise MalformedSlice(f"unknown reference {token!r}")
        name, rpart, cpart = m.groups()
        if name != self.array_id or self.shape is None:
            raise MalformedSlice(f"reference {token!r} does not match the declared array")
        rows, cols = self.shape
        return [
            r * cols + c
            for r in self._indices(rpart, rows, token)
            for c in self._indices(cpart, cols, token)
        ]

    @staticmethod
    def _indices(part: str, n: int, token: str) -> range:
        if part == "":
            return range(n)
        m = _INDEX_RE.match(part)
        if m is None:
            raise MalformedSlice(f"bad index {part!r} in {token!r}")
        lo = int(m.group(1))
        hi = int(m.group(2)) if m.group(2) is not None else lo
        if lo > hi or hi >= n:
            raise MalformedSlice(f"index range {part!r} out of bounds in {token!r}")
        return range(lo, hi + 1)

    def expand_all(self, text: Optional[str]) -> tuple[int, ...]:
        out: list[int] = []
        for token in (text or "").split():
            out.extend(self.expand(token))
        return tuple(out)


def _parse_domain(text: Optional[str]) -> tuple[int, ...]:
    values: list[int] = []
    for token in (text or "").split():
        m = _DOMAIN_TOKEN_RE.match(token)
        if m is None:
            raise DomainParseError(f"bad domain token {token!r}")
        lo = int(m.group(1))
        hi = int(m.group(2)) if m.group(2) is not None else lo
        if lo > hi:
            raise DomainParseError(f"inverted range {token!r}")
        values.extend(range(lo, hi + 1))
    if not values:
        raise DomainParseError("empty domain")
    return tuple(sorted(set(values)))


def _parse_variables(el):
    variables: list[Variable] = []
    shape = None
    lookup = _Lookup()
    for child in el:
        if child.tag == "array":
            if lookup.array_id is not None or lookup.scalars:
                raise UnsupportedElement("array", "only a single array is supported")
            size = child.get("size", "")
            m = _SIZE_RE.match(size)
            if m is None:
                raise UnsupportedElement("array", f"unsupported size {size!r}")
            rows, cols = int(m.group(1)), int(m.group(2))
            domain = _parse_domain(child.text)
            name = child.get("id", "x")
            lookup.array_id = name
            lookup.shape = shape = (rows, cols)
            for i in range(rows * cols):
                variables.append(
                    Variable(id=i, name=f"{name}[{i // cols}][{i % cols}]", domain=domain)
                )
        elif child.tag == "var":
            if lookup.array_id is not None:
                raise UnsupportedElement("var", "cannot mix vars with an array")
            name = child.get("id")
            if not name:
                raise UnsupportedElement("var", "missing id")
            lookup.scalars[name] = len(variables)
            variables.append(Variable(id=len(variables), name=name, domain=_parse_domain(child.text)))
        else:
            raise UnsupportedElement(child.tag)
    if not variables:
        raise UnsupportedElement("variables", "no variables declared")
    return variables, shape, lookup


def _parse_condition(text: Optional[str]) -> tuple[str, int]:
    m = _CONDITION_RE.match((text or "").strip())
    if m is None:
        raise UnsupportedElement("condition", f"unparseable {text!r}")
    op, constant = m.group(1), int(m.group(2))
    if op not in ("eq", "le", "ge"):
        raise UnsupportedElement("condition", f"operator {op!r}")
    return op, constant


def _parse_tuples(text: Optional[str]) -> tuple[tuple[int, ...], ...]:
    out = []
    for body in _TUPLE_RE.findall(text or ""):
        try:
            out.append(tuple(int(v) for v in body.split(",")))
        except ValueError:
            raise UnsupportedElement("supports", f"bad tuple ({body})") from None
    if not out:
        raise UnsupportedElement("extension", "no support tuples")
    return tuple(out)


def _parse_constraint(el, lookup: _Lookup) -> list[Constraint]:
    tag = el.tag
    if tag == "instantiation":
        list_el = el.find("list")
        values_el = el.find("values")
        if list_el is None or values_el is None:
            raise UnsupportedElement("instantiation", "missing list or values")
        scope = lookup.expand_all(list_el.text)
        try:
            values = tuple(int(t) for t in (values_el.text or "").split())
        except ValueError:
            raise DomainParseError("non-integer instantiation value") from None
        return [Instantiation(vars=scope, values=values, label=el.get("class", ""))]
    if tag == "allDifferent":
        return [AllDifferent(vars=lookup.expand_all(el.text))]
    if tag == "sum":
        list_el = el.find("list")
        if list_el is None:
            raise UnsupportedElement("sum", "missing list")
        op, constant = _parse_condition(_find_text(el, "condition"))
        return [SumCompare(vars=lookup.expand_all(list_el.text), op=op, constant=constant)]
    if tag == "intension":
        return [_parse_intension((el.text or "").strip(), lookup)]
    if tag == "extension":
        list_el = el.find("list")
        if list_el is None:
            raise UnsupportedElement("extension", "missing list")
        return [
            Table(vars=lookup.expand_all(list_el.text), tuples=_parse_tuples(_find_text(el, "supports")))
        ]
    if tag == "group":
        return _parse_group(el, lookup)
    raise UnsupportedElement(tag)


def _find_text(el, tag: str) -> Optional[str]:
    child = el.find(tag)
    return None if child is None else child.text


def _parse_intension(text: str, lookup: _Lookup, args: Optional[tuple[int, ...]] = None) -> Constraint:
    m = _INTENSION_RE.match(text)
    if m is None:
        raise UnsupportedElement("intension", f"unsupported function {text!r}")
    op, a, b = m.group(1), m.group(2).strip(), m.group(3).strip()
    strict = op == "lt"
    if args is not None:
        if len(args) != 2:
            raise MalformedSlice(f"intension args need 2 references, got {len(args)}")
        return BinaryLess(x=args[0], y=args[1], strict=strict)
    (x,) = lookup.expand(a)
    (y,) = lookup.expand(b)
    return BinaryLess(x=x, y=y, strict=strict)


def _parse_group(el, lookup: _Lookup) -> list[Constraint]:
    children = list(el)
    if not children:
        raise UnsupportedElement("group", "empty")
    template = children[0]
    args_els = [c for c in children[1:] if c.tag == "args"]
    extras = [c for c in children[1:] if c.tag != "args"]
    if extras:
        raise UnsupportedElement(extras[0].tag, "unexpected inside group")
    if not args_els:  # tolerate args nested inside the template element
        args_els = [c for c in template if c.tag == "args"]
    if not args_els:
        raise UnsupportedElement("group", "no args")
    out: list[Constraint] = []
    for arg in args_els:
        scope = lookup.expand_all(arg.text)
        if template.tag == "allDifferent":
            out.append(AllDifferent(vars=scope))
        elif template.tag == "sum":
            op, constant = _parse_condition(_find_text(template, "condition"))
            out.append(SumCompare(vars=scope, op=op, constant=constant))
        elif template.tag == "intension":
            out.append(_parse_intension((template.text or "").strip(), lookup, args=scope))
        elif template.tag == "extension":
            out.append(Table(vars=scope, tuples=_parse_tuples(_find_text(template, "supports"))))
        else:
            raise UnsupportedElement(template.tag, "unsupported group template")
    return out


# ---------------------------------------------------------------------------
# Comparison


def semantically_equal(a: CspInstance, b: CspInstance) -> bool:
    """Equality over shape, domains and constraints; names and labels aside."""
    if a.array_shape != b.array_shape or len(a.variables) != len(b.variables):
        return False
    if any(va.domain != vb.domain for va, vb in zip(a.variables, b.variables)):
        return False
    if len(a.constraints) != len(b.constraints):
        return False
    return all(_normalize(ca) == _normalize(cb) for ca, cb in zip(a.constraints, b.constraints))


def _normalize(c: Constraint):
    if isinstance(c, Instantiation):
        return ("instantiation", c.vars, c.values)
    if isinstance(c, AllDifferent):
        return ("allDifferent", c.vars)
    if isinstance(c, SumCompare):
        return ("sum", c.vars, c.op, c.constant)
    if isinstance(c, BinaryLess):
        return ("less", c.x, c.y, c.strict)
    if isinstance(c, Table):
        return ("table", c.vars, c.tuples)
    return ("other", repr(c))
