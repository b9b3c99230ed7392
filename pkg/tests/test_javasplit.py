import pathlib
from collections import Counter

import pytest

from methodloc.javasplit import (
    MethodUnit,
    ParseError,
    method_file_name,
    render_method_file,
    split_compilation_unit,
)
from methodloc.javasplit.fields import extract_fields
from oracles import find_concrete_methods

HMAC_STYLE = """package org.apache.commons.codec.digest;

import javax.crypto.Mac;

/** Utility methods. */
public final class HmacUtils {
    /** One-arg digest. */
    public byte[] hmac(String valueToDigest) {
        return valueToDigest.getBytes();
    }

    public String hmacHex() {
        return "00";
    }
}
"""


class TestSplit:
    def test_hmac_style_file_names(self):
        units = split_compilation_unit(HMAC_STYLE, "HmacUtils.java")
        assert [method_file_name(u) for u in units] == [
            "HmacUtils#hmac(String).java",
            "HmacUtils#hmacHex().java",
        ]

    def test_no_methods(self):
        assert split_compilation_unit("package p; class C {}") == []

    def test_overloads_distinguished_by_param_types(self):
        src = """class HmacUtils {
            static int updateHmac(Mac mac, java.io.InputStream in) { return 1; }
            static int updateHmac(Mac mac, byte[] b) { return 2; }
            static int updateHmac(Mac mac, String s) { return 3; }
        }"""
        units = split_compilation_unit(src)
        assert [u.param_types for u in units] == [
            ("Mac", "InputStream"),
            ("Mac", "byte[]"),
            ("Mac", "String"),
        ]
        assert len({method_file_name(u) for u in units}) == 3

    def test_body_text_is_verbatim_substring(self):
        units = split_compilation_unit(HMAC_STYLE)
        for u in units:
            assert u.body_text in HMAC_STYLE
            assert u.body_text.endswith("}")

    def test_javadoc_attached_and_verbatim(self):
        units = split_compilation_unit(HMAC_STYLE)
        assert units[0].javadoc == "/** One-arg digest. */"
        assert units[1].javadoc is None

    def test_line_numbers(self):
        units = split_compilation_unit(HMAC_STYLE)
        assert (units[0].start_line, units[0].end_line) == (8, 10)

    def test_abstract_and_interface_members_skipped(self):
        src = """interface I {
            int noBody(int x);
            default int withBody() { return 1; }
        }
        abstract class A { abstract void g(); }
        """
        units = split_compilation_unit(src)
        assert [u.method_name for u in units] == ["withBody"]

    def test_constructor_uses_class_name(self):
        units = split_compilation_unit("class C { C() {} }")
        assert [method_file_name(u) for u in units] == ["C#C().java"]

    def test_anonymous_ordinals_in_textual_order(self):
        src = """class C {
            Runnable a = new Runnable() { public void run() {} };
            void m() { new Thread(new Runnable() { public void run() {} }).start(); }
        }"""
        units = split_compilation_unit(src)
        chains = [u.class_chain for u in units]
        assert ("C", "anon$1") in chains and ("C", "anon$2") in chains

    def test_parse_error_on_garbage(self):
        with pytest.raises(ParseError):
            split_compilation_unit("class C { void broken( { }")
        with pytest.raises(ParseError):
            split_compilation_unit('class C { String s = "unterminated; }')

    def test_unicode_identifiers(self):
        units = split_compilation_unit("class Café { void naïve() {} }")
        assert units[0].class_chain == ("Café",)


class TestRender:
    def test_package_and_headers(self):
        units = split_compilation_unit(HMAC_STYLE, "HmacUtils.java")
        rendered = render_method_file(units[1])
        lines = rendered.splitlines()
        assert lines[0] == "package org.apache.commons.codec.digest;"
        assert lines[1] == "class HmacUtils {"
        assert rendered.rstrip().endswith("}")

    def test_no_package_line_when_default_package(self):
        units = split_compilation_unit("class C { void f() {} }")
        assert not render_method_file(units[0]).startswith("package")

    def test_nested_chain_round_trips(self):
        src = "package p; class Outer { class Inner { int f(int x) { return x; } } }"
        unit = split_compilation_unit(src)[0]
        rendered = render_method_file(unit)
        assert rendered.count("class ") == 2
        again = split_compilation_unit(rendered)
        assert len(again) == 1
        assert again[0].body_text == unit.body_text
        assert again[0].class_chain == ("Outer", "Inner")

    def test_rendered_file_reparses_with_javadoc(self):
        for unit in split_compilation_unit(HMAC_STYLE, "HmacUtils.java"):
            again = split_compilation_unit(render_method_file(unit))
            assert len(again) == 1
            assert again[0].javadoc == unit.javadoc


class TestMethodFileName:
    def test_generics_erased_arrays_kept(self):
        src = "class Outer { class Inner { void f(java.util.List<String> l, int[] a) {} } }"
        unit = split_compilation_unit(src)[0]
        assert method_file_name(unit) == "Outer$Inner#f(List,int[]).java"

    def test_varargs_rendered_as_array(self):
        unit = split_compilation_unit("class C { void f(String... rest) {} }")[0]
        assert method_file_name(unit) == "C#f(String[]).java"

    def test_percent_encoding_of_unsafe_characters(self):
        unit = MethodUnit(
            package_name="", class_chain=("C",), method_name="café",
            param_types=(), javadoc=None, body_text="void café() {}",
            origin_path="x", start_line=1, end_line=1,
        )
        assert method_file_name(unit) == "C#caf%C3%A9().java"

    def test_injective_within_corpus_unit(self, corpus_files):
        for path in corpus_files:
            text = pathlib.Path(path).read_text(encoding="utf-8", errors="replace")
            units = split_compilation_unit(text, path)
            names = [method_file_name(u) for u in units]
            assert len(names) == len(set(names)), path


class TestCorpusAgainstOracle:
    def test_coverage_multiset_matches_independent_parse(self, corpus_files):
        for path in corpus_files:
            text = pathlib.Path(path).read_text(encoding="utf-8", errors="replace")
            mine = Counter(u.body_text for u in split_compilation_unit(text, path))
            reference = Counter(find_concrete_methods(text))
            assert mine == reference, f"disagreement on {path}"

    def test_round_trip_identity_over_corpus(self, corpus_files):
        for path in corpus_files[::7]:  # sampled; full sweep runs in acceptance
            text = pathlib.Path(path).read_text(encoding="utf-8", errors="replace")
            for unit in split_compilation_unit(text, path):
                again = split_compilation_unit(render_method_file(unit))
                matching = [v for v in again if v.body_text == unit.body_text]
                assert len(matching) == 1
                v = matching[0]
                assert (v.class_chain, v.method_name, v.param_types) == (
                    unit.class_chain, unit.method_name, unit.param_types,
                )


class TestExtractFields:
    def test_fields_from_valid_source(self):
        fields = extract_fields(HMAC_STYLE)
        assert "HmacUtils" in fields["class_names"].split()
        assert fields["method_names"].split() == ["hmac", "hmacHex"]
        assert "valueToDigest" in fields["identifiers"].split()
        assert "Utility methods." in fields["comments"]

    def test_fields_survive_unparseable_source(self):
        fields = extract_fields("not java at all {{{")
        assert "java" in fields["identifiers"].split()
        assert fields["method_names"] == ""
