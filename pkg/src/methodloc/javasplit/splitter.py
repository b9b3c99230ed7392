"""Split Java compilation units into self-contained single-method files.

split_compilation_unit walks declarations only: type bodies, member
signatures and brace structure. Statement/expression territory is treated
as opaque apart from the constructs that can introduce further methods
(local classes, anonymous class bodies, enum constant bodies).

Emitted units cover every concrete method or constructor declaration,
wherever it is nested. Bodiless members (abstract/interface/annotation
declarations) yield nothing. Methods inside anonymous class bodies get a
synthetic chain element ``anon$<n>``, numbered in textual order within the
compilation unit; enum constant bodies follow the same convention.
"""

from __future__ import annotations

from dataclasses import dataclass

from .lexer import COMMENT, PUNCT, WORD, LineIndex, ParseError, Token, lex

__all__ = [
    "MethodUnit",
    "ParseError",
    "UnencodableName",
    "split_compilation_unit",
    "render_method_file",
    "method_file_name",
]


class UnencodableName(ValueError):
    """Method-file name is empty after sanitization."""


@dataclass(frozen=True)
class MethodUnit:
    """One extracted method: identity, surrounding context, verbatim text."""

    package_name: str
    class_chain: tuple[str, ...]
    method_name: str
    param_types: tuple[str, ...]
    javadoc: str | None
    body_text: str
    origin_path: str
    start_line: int
    end_line: int


_MODIFIER_WORDS = frozenset(
    """public protected private static final abstract native synchronized
    transient volatile strictfp default sealed""".split()
)

_TYPE_KEYWORDS = frozenset(("class", "interface", "enum"))


class _Splitter:
    def __init__(self, source: str, origin_path: str):
        self.source = source
        self.origin_path = origin_path
        self.raw = lex(source)
        self.lines = LineIndex(source)
        # Significant tokens (comments carried separately for javadoc lookup).
        self.sig: list[Token] = [t for t in self.raw if t.kind != COMMENT]
        self.raw_index: dict[int, int] = {}  # sig position -> raw position
        j = 0
        for i, t in enumerate(self.raw):
            if t.kind != COMMENT:
                self.raw_index[j] = i
                j += 1
        self.braces = self._match_pairs("{", "}")
        self.parens = self._match_pairs("(", ")")
        self.package_name = ""
        self.units: list[MethodUnit] = []
        self.anon_count = 0

    # -- token helpers ---------------------------------------------------

    def _match_pairs(self, open_ch: str, close_ch: str) -> dict[int, int]:
        pairs: dict[int, int] = {}
        stack: list[int] = []
        for i, t in enumerate(self.sig):
            if t.kind != PUNCT:
                continue
            ch = self.source[t.start]
            if ch == open_ch:
                stack.append(i)
            elif ch == close_ch:
                if not stack:
                    raise ParseError(self.lines.line_of(t.start), f"unbalanced {close_ch!r}")
                pairs[stack.pop()] = i
        if stack:
            t = self.sig[stack[-1]]
            raise ParseError(self.lines.line_of(t.start), f"unclosed {open_ch!r}")
        return pairs

    def _text(self, i: int) -> str:
        t = self.sig[i]
        return self.source[t.start : t.end]

    def _is(self, i: int, ch: str) -> bool:
        return (
            i < len(self.sig)
            and self.sig[i].kind == PUNCT
            and self.source[self.sig[i].start] == ch
        )

    def _is_word(self, i: int, word: str | None = None) -> bool:
        if i >= len(self.sig) or self.sig[i].kind != WORD:
            return False
        return word is None or self._text(i) == word

    def _fail(self, i: int, message: str) -> ParseError:
        offset = self.sig[i].start if i < len(self.sig) else len(self.source)
        return ParseError(self.lines.line_of(offset), message)

    def _skip_angles(self, i: int) -> int:
        """i points at '<' in a declaration context; return index past '>'."""
        depth = 0
        start = i
        while i < len(self.sig):
            if self._is(i, "<"):
                depth += 1
            elif self._is(i, ">"):
                depth -= 1
                if depth == 0:
                    return i + 1
            elif self._is(i, ";") or self._is(i, "{"):
                break
            i += 1
        raise self._fail(start, "unbalanced type arguments")

    def _skip_qualified(self, i: int) -> int:
        """Skip Name(.Name)* with optional type arguments per segment."""
        if not self._is_word(i):
            raise self._fail(i, "expected a name")
        i += 1
        while True:
            if self._is(i, "<"):
                i = self._skip_angles(i)
            if self._is(i, ".") and self._is_word(i + 1):
                i += 2
            else:
                return i

    def _skip_annotation(self, i: int) -> int:
        """i points at '@'; returns index past the annotation (not @interface)."""
        i = self._skip_qualified(i + 1)
        if self._is(i, "("):
            i = self.parens[i] + 1
        return i

    # -- parsing ---------------------------------------------------------

    def run(self) -> list[MethodUnit]:
        self._container_body(0, len(self.sig), (), kind="top", record_components=None)
        return self.units

    def _container_body(
        self,
        i: int,
        end: int,
        chain: tuple[str, ...],
        kind: str,
        record_components: tuple[str, ...] | None,
    ) -> None:
        while i < end:
            i = self._member(i, end, chain, kind, record_components)

    def _member(
        self,
        i: int,
        end: int,
        chain: tuple[str, ...],
        kind: str,
        record_components: tuple[str, ...] | None,
    ) -> int:
        decl_start = i
        while i < end:
            if self._is(i, ";"):
                return i + 1
            if self._is(i, "@"):
                if self._is_word(i + 1, "interface"):
                    return self._type_decl(decl_start, i + 1, chain, "interface")
                i = self._skip_annotation(i)
                continue
            if self._is_word(i) and self._text(i) in _MODIFIER_WORDS:
                i += 1
                continue
            if self._is_word(i, "non") and self._is(i + 1, "-") and self._is_word(i + 2, "sealed"):
                i += 3
                continue
            break
        if i >= end:
            return end
        if self._is(i, "{"):  # static or instance initializer
            close = self.braces[i]
            self._scan_block(i + 1, close, chain)
            return close + 1
        if self._is(i, "<"):
            i = self._skip_angles(i)
        if self._is_word(i) and self._text(i) in _TYPE_KEYWORDS:
            return self._type_decl(decl_start, i, chain, self._text(i))
        if self._is_word(i, "record") and self._is_word(i + 1) and self._is(i + 2, "("):
            return self._type_decl(decl_start, i, chain, "record")
        if kind == "top":
            if self._is_word(i, "package"):
                j = i + 1
                parts = []
                while j < end and not self._is(j, ";"):
                    parts.append(self._text(j))
                    j += 1
                self.package_name = "".join(parts)
                return j + 1
            if self._is_word(i, "import"):
                j = i + 1
                while j < end and not self._is(j, ";"):
                    j += 1
                return j + 1

        if not self._is_word(i):
            # Stray token at member level; tolerate by skipping it.
            return i + 1

        # Type-or-name: the first segment decides between constructor,
        # method, field, and the record compact constructor.
        seg_start = i
        i = self._skip_qualified(i)
        last_word = self._last_word_text(seg_start, i)
        while self._is(i, "[") and self._is(i + 1, "]"):
            i += 2
        if self._is(i, "("):
            return self._method_rest(decl_start, last_word, i, chain)
        if (
            self._is(i, "{")
            and kind == "record"
            and chain
            and last_word == chain[-1]
            and record_components is not None
        ):
            # Compact canonical constructor: no parameter list in source.
            close = self.braces[i]
            self._emit(decl_start, close, chain, last_word, record_components)
            self._scan_block(i + 1, close, chain)
            return close + 1
        if self._is_word(i):
            name = self._text(i)
            i += 1
            if self._is(i, "("):
                return self._method_rest(decl_start, name, i, chain)
            # Field declaration: skip declarators to ';', looking inside
            # initializer expressions for anything that declares methods.
            return self._skip_statement(i, end, chain)
        return self._skip_statement(i, end, chain)

    def _last_word_text(self, start: int, end: int) -> str:
        for j in range(end - 1, start - 1, -1):
            if self.sig[j].kind == WORD:
                return self._text(j)
        raise self._fail(start, "expected an identifier")

    def _skip_statement(self, i: int, end: int, chain: tuple[str, ...]) -> int:
        """Advance past ';' at this level, scanning skipped expressions."""
        while i < end:
            if self._is(i, ";"):
                return i + 1
            if self._is(i, "("):
                close = self.parens[i]
                self._scan_block(i + 1, close, chain)
                i = close + 1
                continue
            if self._is(i, "{"):
                close = self.braces[i]
                self._scan_block(i + 1, close, chain)
                i = close + 1
                continue
            if self._is_word(i, "new"):
                i = self._creation(i, chain)
                continue
            i += 1
        return end

    def _method_rest(
        self,
        decl_start: int,
        name: str,
        open_paren: int,
        chain: tuple[str, ...],
    ) -> int:
        close_paren = self.parens[open_paren]
        params = self._param_types(open_paren + 1, close_paren)
        i = close_paren + 1
        while self._is(i, "[") and self._is(i + 1, "]"):
            i += 2  # archaic array-returning syntax: int f()[]
        if self._is_word(i, "throws"):
            i += 1
            while True:
                while self._is(i, "@"):
                    i = self._skip_annotation(i)
                i = self._skip_qualified(i)
                if self._is(i, ","):
                    i += 1
                else:
                    break
        if self._is(i, "{"):
            close = self.braces[i]
            self._emit(decl_start, close, chain, name, params)
            # The body may declare further methods (local/anonymous classes).
            self._scan_block(i + 1, close, chain)
            return close + 1
        if self._is_word(i, "default"):  # annotation element default value
            i += 1
            while i < len(self.sig) and not self._is(i, ";"):
                if self._is(i, "("):
                    i = self.parens[i] + 1
                elif self._is(i, "{"):
                    i = self.braces[i] + 1
                else:
                    i += 1
        if self._is(i, ";"):
            return i + 1
        # No body and no ';': be conservative, something is off.
        raise self._fail(i, f"malformed declaration of {name!r}")

    def _type_decl(
        self, decl_start: int, kw: int, chain: tuple[str, ...], kind: str
    ) -> int:
        i = kw + 1
        if not self._is_word(i):
            raise self._fail(i, f"expected a type name after {kind!r}")
        name = self._text(i)
        i += 1
        if self._is(i, "<"):
            i = self._skip_angles(i)
        components: tuple[str, ...] | None = None
        if kind == "record" and self._is(i, "("):
            close = self.parens[i]
            components = self._param_types(i + 1, close)
            i = close + 1
        while i < len(self.sig) and not self._is(i, "{"):
            if self._is(i, "<"):
                i = self._skip_angles(i)
                continue
            if self._is(i, "("):  # annotation arguments in a supertype list
                i = self.parens[i] + 1
                continue
            if self._is(i, ";"):  # bodiless declaration is not valid; bail out
                return i + 1
            i += 1
        if i >= len(self.sig):
            raise self._fail(kw, f"missing body for type {name!r}")
        close = self.braces[i]
        sub_chain = chain + (name,)
        if kind == "enum":
            self._enum_body(i + 1, close, sub_chain)
        else:
            self._container_body(i + 1, close, sub_chain, kind, components)
        return close + 1

    def _enum_body(self, i: int, end: int, chain: tuple[str, ...]) -> None:
        # Constants first: [annotations] NAME [ (args) ] [ {body} ] , ... ;
        while i < end:
            if self._is(i, ";"):
                i += 1
                break
            if self._is(i, "@"):
                i = self._skip_annotation(i)
                continue
            if self._is(i, ","):
                i += 1
                continue
            if not self._is_word(i):
                break  # unexpected; treat the rest as members
            i += 1
            if self._is(i, "("):
                close = self.parens[i]
                self._scan_block(i + 1, close, chain)
                i = close + 1
            if self._is(i, "{"):
                close = self.braces[i]
                self.anon_count += 1
                anon_chain = chain + (f"anon${self.anon_count}",)
                self._container_body(i + 1, close, anon_chain, "class", None)
                i = close + 1
        self._container_body(i, end, chain, "class", None)

    def _creation(self, i: int, chain: tuple[str, ...]) -> int:
        """i points at 'new'; handles anonymous class bodies, returns next index."""
        i += 1
        if self._is(i, "<"):
            i = self._skip_angles(i)
        if not self._is_word(i):
            return i  # 'new' used oddly; let the block scanner carry on
        i = self._skip_qualified(i)
        if self._is(i, "["):
            return i  # array creation; block scanner handles the initializer
        if not self._is(i, "("):
            return i
        close = self.parens[i]
        self._scan_block(i + 1, close, chain)
        i = close + 1
        if self._is(i, "{"):
            close = self.braces[i]
            self.anon_count += 1
            anon_chain = chain + (f"anon${self.anon_count}",)
            self._container_body(i + 1, close, anon_chain, "class", None)
            return close + 1
        return i

    def _scan_block(self, i: int, end: int, chain: tuple[str, ...]) -> None:
        """Statement/expression territory: only method-introducing constructs matter."""
        while i < end:
            if self._is_word(i) and self._text(i) in _TYPE_KEYWORDS:
                # Guard against 'Foo.class' and 'int.class' literals.
                prev_dot = i > 0 and self._is(i - 1, ".")
                if not prev_dot and self._is_word(i + 1):
                    i = self._type_decl(i, i, chain, self._text(i))
                    continue
            if self._is_word(i, "record") and self._is_word(i + 1) and self._is(i + 2, "("):
                i = self._type_decl(i, i, chain, "record")
                continue
            if self._is_word(i, "new"):
                i = self._creation(i, chain)
                continue
            i += 1

    def _param_types(self, i: int, end: int) -> tuple[str, ...]:
        """Erased simple parameter types between '(' and ')' sig indices."""
        if i >= end:
            return ()
        params: list[str] = []
        seg_words: list[str] = []
        dims = 0
        varargs = False
        depth = 0

        def flush():
            nonlocal seg_words, dims, varargs
            if seg_words:
                if seg_words[-1] == "this":  # receiver parameter
                    pass
                else:
                    base = seg_words[-2] if len(seg_words) >= 2 else seg_words[-1]
                    params.append(base + "[]" * (dims + (1 if varargs else 0)))
            seg_words, dims, varargs = [], 0, False

        j = i
        while j < end:
            t = self.sig[j]
            ch = self.source[t.start] if t.kind == PUNCT else ""
            if ch and ch in "(<":
                depth += 1
            elif ch and ch in ")>":
                depth -= 1
            elif depth == 0:
                if ch == ",":
                    flush()
                    j += 1
                    continue
                if ch == "[":
                    dims += 1
                elif ch == "." and self._is(j + 1, ".") and self._is(j + 2, "."):
                    varargs = True
                    j += 3
                    continue
                elif ch == "@":
                    j = self._skip_annotation(j)
                    continue
            if depth == 0 and t.kind == WORD and self._text(j) != "final":
                seg_words.append(self._text(j))
            j += 1
        flush()
        return tuple(params)

    def _emit(
        self,
        decl_start: int,
        close_brace: int,
        chain: tuple[str, ...],
        name: str,
        params: tuple[str, ...],
    ) -> None:
        if not chain:
            raise self._fail(decl_start, "method outside any type declaration")
        start_tok = self.sig[decl_start]
        end_tok = self.sig[close_brace]
        body_text = self.source[start_tok.start : end_tok.end]
        javadoc = self._javadoc_before(decl_start)
        self.units.append(
            MethodUnit(
                package_name=self.package_name,
                class_chain=chain,
                method_name=name,
                param_types=params,
                javadoc=javadoc,
                body_text=body_text,
                origin_path=self.origin_path,
                start_line=self.lines.line_of(start_tok.start),
                end_line=self.lines.line_of(end_tok.start),
            )
        )

    def _javadoc_before(self, decl_start: int) -> str | None:
        r = self.raw_index[decl_start] - 1
        while r >= 0 and self.raw[r].kind == COMMENT:
            text = self.raw[r].text(self.source)
            if text.startswith("/**") and text != "/**/":
                return text
            r -= 1
        return None


def split_compilation_unit(source: str, origin_path: str = "<memory>") -> list[MethodUnit]:
    """Extract every concrete method/constructor declaration of ``source``.

    Raises ParseError when the text does not hold together as Java; callers
    that transform whole repositories decide the fallback policy.
    """
    return _Splitter(source, origin_path).run()


def render_method_file(unit: MethodUnit) -> str:
    """Wrap one method back into a parseable compilation unit.

    Package declaration, one class header per chain element, the Javadoc
    and declaration text verbatim, then the closing braces. Nothing else
    travels along, so the output is self-contained but intentionally not
    compilable against the rest of the project.
    """
    parts: list[str] = []
    if unit.package_name:
        parts.append(f"package {unit.package_name};")
    for cls in unit.class_chain:
        parts.append(f"class {cls} {{")
    if unit.javadoc:
        parts.append(unit.javadoc)
    parts.append(unit.body_text)
    parts.extend("}" for _ in unit.class_chain)
    return "\n".join(parts) + "\n"


_NAME_SAFE = frozenset(
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789_$#(),.[]-"
)


def _sanitize(name: str) -> str:
    out: list[str] = []
    for ch in name:
        if ch in _NAME_SAFE:
            out.append(ch)
        else:
            out.extend(f"%{b:02X}" for b in ch.encode("utf-8"))
    return "".join(out)


def method_file_name(unit: MethodUnit) -> str:
    """Leaf file name: ``Outer$Inner#method(TypeA,TypeB[]).java``."""
    stem = f"{'$'.join(unit.class_chain)}#{unit.method_name}({','.join(unit.param_types)})"
    encoded = _sanitize(stem)
    if not encoded:
        raise UnencodableName(f"empty method file name for {unit.method_name!r}")
    return encoded + ".java"
