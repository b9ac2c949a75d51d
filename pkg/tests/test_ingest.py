"""Scan file parsing, validation, canonical serialization, and directory
ingestion."""

from __future__ import annotations

import copy
import json
import random
from pathlib import Path

import pytest

from vulnex.errors import ParseError, ValidationError
from vulnex.ingest import (
    FORMAT_VERSION,
    canonicalize,
    ingest_directory,
    parse_scan_file,
)
from vulnex.ingest.vsif import document_from_obj, document_to_obj

GOLDEN = Path(__file__).parent / "data" / "golden" / "minimal.vulnex.json"


@pytest.fixture()
def golden_bytes() -> bytes:
    return GOLDEN.read_bytes()


@pytest.fixture()
def golden_obj(golden_bytes) -> dict:
    return json.loads(golden_bytes)


class TestParsing:
    def test_golden_fields_land(self, golden_bytes):
        doc = parse_scan_file(golden_bytes)
        assert doc.format_version == FORMAT_VERSION
        assert doc.scan_timestamp == "2020-05-01T12:00:00Z"
        assert doc.repository.id == "org.demo:anchor"
        assert doc.repository.source_url == "https://github.com/demo/anchor"
        assert doc.repository.meta.lgtm_grade == "A"
        assert doc.repository.meta.github_watchers == 14

        assert [m.id for m in doc.modules] == ["org.demo:anchor.app", "org.demo:anchor.app.web"]
        assert doc.modules[1].parent_module_id == "org.demo:anchor.app"
        assert all(m.repository_id == doc.repository.id for m in doc.modules)

        assert [l.digest for l in doc.libraries] == ["aaa111", "bbb222"]
        assert doc.libraries[0].meta.lgtm_grade == "B"
        assert doc.libraries[0].coordinates == "org.demo:alpha:1.0"
        assert doc.libraries[1].meta is None

        scored, unscored = doc.vulnerabilities
        assert scored.cve_id == "CVE-2020-0001"
        assert scored.cvss_score == 9.8
        assert scored.cvss_vector.startswith("CVSS:3.0/")
        assert unscored.cvss_score is None

        assert doc.affects[0].reachable is True
        assert doc.affects[1].reachable is None
        assert doc.warnings == ()

    def test_accepts_str_and_bytes(self, golden_bytes):
        assert parse_scan_file(golden_bytes) == parse_scan_file(golden_bytes.decode("utf-8"))

    def test_invalid_utf8(self):
        with pytest.raises(ParseError, match="not valid UTF-8"):
            parse_scan_file(b"\xff\xfe{}")

    def test_invalid_json_has_position(self):
        with pytest.raises(ParseError) as exc_info:
            parse_scan_file('{\n  "formatVersion": }')
        assert exc_info.value.line == 2
        assert exc_info.value.column is not None

    def test_top_level_must_be_object(self):
        with pytest.raises(ValidationError, match="top level"):
            parse_scan_file("[1, 2]")


class TestValidation:
    def _mutate(self, obj, fn):
        mutated = copy.deepcopy(obj)
        fn(mutated)
        return mutated

    def test_unknown_format_version(self, golden_obj):
        bad = self._mutate(golden_obj, lambda o: o.update(formatVersion="2"))
        with pytest.raises(ValidationError, match="formatVersion"):
            document_from_obj(bad)

    @pytest.mark.parametrize(
        "missing",
        ["formatVersion", "scanTimestamp", "repository", "modules", "libraries",
         "vulnerabilities", "dependencies", "affects"],
    )
    def test_missing_required_top_field(self, golden_obj, missing):
        bad = self._mutate(golden_obj, lambda o: o.pop(missing))
        with pytest.raises(ValidationError, match=missing):
            document_from_obj(bad)

    @pytest.mark.parametrize("ts", ["yesterday", "2020-13-40T99:00:00Z", ""])
    def test_bad_timestamp(self, golden_obj, ts):
        bad = self._mutate(golden_obj, lambda o: o.update(scanTimestamp=ts))
        with pytest.raises(ValidationError, match="ISO-8601"):
            document_from_obj(bad)

    @pytest.mark.parametrize(
        "ts", ["2020-05-01T12:00:00Z", "2020-05-01T12:00:00+02:00", "2020-05-01 12:00:00"]
    )
    def test_good_timestamp_kept_verbatim(self, golden_obj, ts):
        obj = self._mutate(golden_obj, lambda o: o.update(scanTimestamp=ts))
        assert document_from_obj(obj).scan_timestamp == ts

    def test_duplicate_module_id_named(self, golden_obj):
        bad = self._mutate(
            golden_obj, lambda o: o["modules"].append(dict(o["modules"][0]))
        )
        with pytest.raises(ValidationError, match="duplicate module id 'org.demo:anchor.app'"):
            document_from_obj(bad)

    def test_duplicate_library_digest_named(self, golden_obj):
        bad = self._mutate(
            golden_obj, lambda o: o["libraries"].append(dict(o["libraries"][0], artifact="other"))
        )
        with pytest.raises(ValidationError, match="duplicate library digest 'aaa111'"):
            document_from_obj(bad)

    def test_duplicate_cve_named(self, golden_obj):
        bad = self._mutate(
            golden_obj, lambda o: o["vulnerabilities"].append({"cveId": "CVE-2020-0001"})
        )
        with pytest.raises(ValidationError, match="duplicate vulnerability id 'CVE-2020-0001'"):
            document_from_obj(bad)

    def test_dependency_unknown_module(self, golden_obj):
        bad = self._mutate(
            golden_obj,
            lambda o: o["dependencies"].append({"moduleId": "ghost", "libraryDigest": "aaa111"}),
        )
        with pytest.raises(ValidationError, match="unknown module id 'ghost'"):
            document_from_obj(bad)

    def test_dependency_unknown_digest(self, golden_obj):
        bad = self._mutate(
            golden_obj,
            lambda o: o["dependencies"].append(
                {"moduleId": "org.demo:anchor.app", "libraryDigest": "nope"}
            ),
        )
        with pytest.raises(ValidationError, match="unknown library digest 'nope'"):
            document_from_obj(bad)

    def test_affects_unknown_cve(self, golden_obj):
        bad = self._mutate(
            golden_obj,
            lambda o: o["affects"].append({"libraryDigest": "aaa111", "cveId": "CVE-1999-9999"}),
        )
        with pytest.raises(ValidationError, match="unknown CVE id 'CVE-1999-9999'"):
            document_from_obj(bad)

    def test_affects_unknown_digest(self, golden_obj):
        bad = self._mutate(
            golden_obj,
            lambda o: o["affects"].append({"libraryDigest": "nope", "cveId": "CVE-2020-0001"}),
        )
        with pytest.raises(ValidationError, match="unknown library digest 'nope'"):
            document_from_obj(bad)

    def test_unknown_parent_module(self, golden_obj):
        bad = self._mutate(
            golden_obj, lambda o: o["modules"][1].update(parentModuleId="ghost")
        )
        with pytest.raises(ValidationError, match="unknown parent module 'ghost'"):
            document_from_obj(bad)

    def test_parent_cycle(self, golden_obj):
        def make_cycle(o):
            o["modules"][0]["parentModuleId"] = "org.demo:anchor.app.web"

        with pytest.raises(ValidationError, match="cycle"):
            document_from_obj(self._mutate(golden_obj, make_cycle))

    def test_reachable_must_be_bool(self, golden_obj):
        bad = self._mutate(golden_obj, lambda o: o["affects"][0].update(reachable="yes"))
        with pytest.raises(ValidationError, match="reachable"):
            document_from_obj(bad)

    def test_malformed_score_rejected(self, golden_obj):
        bad = self._mutate(golden_obj, lambda o: o["vulnerabilities"][0].update(cvssScore="high"))
        with pytest.raises(ValidationError):
            document_from_obj(bad)

    def test_unknown_fields_warn_not_fail(self, golden_obj):
        obj = self._mutate(
            golden_obj,
            lambda o: (o.update(vendorExtras={}), o["repository"].update(color="teal")),
        )
        doc = document_from_obj(obj, source="x")
        assert any("vendorExtras" in w for w in doc.warnings)
        assert any("color" in w for w in doc.warnings)

    def test_duplicate_edges_dedupe_with_warning(self, golden_obj):
        obj = self._mutate(
            golden_obj,
            lambda o: (
                o["dependencies"].append(dict(o["dependencies"][0])),
                o["affects"].append({"libraryDigest": "aaa111", "cveId": "CVE-2020-0001"}),
            ),
        )
        doc = document_from_obj(obj)
        assert len(doc.dependencies) == 2
        assert len(doc.affects) == 2
        assert sum("duplicate" in w for w in doc.warnings) == 2

    def test_error_messages_carry_source_label(self, golden_obj):
        bad = self._mutate(golden_obj, lambda o: o.pop("modules"))
        with pytest.raises(ValidationError, match="scans/a.vulnex.json"):
            document_from_obj(bad, source="scans/a.vulnex.json")


class TestCanonicalForm:
    def test_golden_round_trip_is_byte_identical(self, golden_bytes):
        doc = parse_scan_file(golden_bytes)
        assert canonicalize(doc).encode("utf-8") == golden_bytes

    def test_canonicalize_idempotent(self, golden_bytes):
        once = canonicalize(parse_scan_file(golden_bytes))
        twice = canonicalize(parse_scan_file(once))
        assert once == twice

    def test_key_and_list_order_is_immaterial(self, golden_obj, golden_bytes):
        rng = random.Random(7)

        def shuffle(value):
            if isinstance(value, dict):
                items = [(k, shuffle(v)) for k, v in value.items()]
                rng.shuffle(items)
                return dict(items)
            if isinstance(value, list):
                copy_ = [shuffle(v) for v in value]
                rng.shuffle(copy_)
                return copy_
            return value

        for _ in range(5):
            scrambled = json.dumps(shuffle(golden_obj))
            assert canonicalize(parse_scan_file(scrambled)).encode("utf-8") == golden_bytes

    def test_scores_serialize_with_one_decimal(self):
        obj = {
            "formatVersion": "1",
            "scanTimestamp": "2020-01-01T00:00:00Z",
            "repository": {"id": "r", "name": "r"},
            "modules": [{"id": "m", "name": "m"}],
            "libraries": [{"group": "g", "artifact": "a", "version": "1", "digest": "d"}],
            "vulnerabilities": [{"cveId": "CVE-2020-1111", "cvssScore": 7.449999}],
            "dependencies": [],
            "affects": [],
        }
        text = canonicalize(document_from_obj(obj))
        assert '"cvssScore": 7.4' in text
        assert "7.449999" not in text

    def test_trailing_newline_and_lf_only(self, golden_bytes):
        assert golden_bytes.endswith(b"\n")
        assert b"\r" not in golden_bytes

    def test_corpus_files_are_canonical(self, org_dir):
        for path in sorted(org_dir.glob("*.vulnex.json")):
            raw = path.read_bytes()
            assert canonicalize(parse_scan_file(raw, source=path.name)).encode("utf-8") == raw

    def test_to_obj_from_obj_round_trip(self, golden_bytes):
        doc = parse_scan_file(golden_bytes)
        again = document_from_obj(document_to_obj(doc))
        assert again == doc


class TestDirectoryIngestion:
    def test_corpus_loads_clean(self, org_dir):
        docs, report = ingest_directory(org_dir)
        assert report.ok
        assert report.files_read == 33
        assert report.repositories_loaded == 33
        assert len(docs) == 33
        # files are named after the repository, so name order == id order here
        assert [d.repository.id for d in docs] == sorted(d.repository.id for d in docs)

    def test_not_a_directory(self, tmp_path):
        with pytest.raises(NotADirectoryError):
            ingest_directory(tmp_path / "missing")

    def test_empty_directory(self, tmp_path):
        docs, report = ingest_directory(tmp_path)
        assert docs == []
        assert report.files_read == 0
        assert report.ok

    def test_non_scan_files_ignored(self, tmp_path, golden_bytes):
        (tmp_path / "a.vulnex.json").write_bytes(golden_bytes)
        (tmp_path / "notes.txt").write_text("hello")
        (tmp_path / "other.json").write_text("{}")
        docs, report = ingest_directory(tmp_path)
        assert report.files_read == 1
        assert len(docs) == 1

    def test_bad_file_rejected_others_survive(self, tmp_path, golden_bytes):
        (tmp_path / "bad.vulnex.json").write_text("{nope")
        (tmp_path / "good.vulnex.json").write_bytes(golden_bytes)
        docs, report = ingest_directory(tmp_path)
        assert len(docs) == 1
        assert not report.ok
        (name, reason), = report.rejected
        assert name == "bad.vulnex.json"
        assert "invalid JSON" in reason

    def test_duplicate_repository_id_rejected(self, tmp_path, golden_bytes):
        (tmp_path / "a.vulnex.json").write_bytes(golden_bytes)
        (tmp_path / "b.vulnex.json").write_bytes(golden_bytes)
        docs, report = ingest_directory(tmp_path)
        assert len(docs) == 1
        (name, reason), = report.rejected
        assert name == "b.vulnex.json"
        assert "already loaded from a.vulnex.json" in reason

    def test_warnings_attributed_to_file(self, tmp_path, golden_obj):
        golden_obj["surprise"] = 1
        (tmp_path / "w.vulnex.json").write_text(json.dumps(golden_obj))
        _, report = ingest_directory(tmp_path)
        assert report.ok
        assert any(name == "w.vulnex.json" and "surprise" in msg for name, msg in report.warnings)

    def test_summary_lines_mention_rejects(self, tmp_path):
        (tmp_path / "bad.vulnex.json").write_text("[]")
        _, report = ingest_directory(tmp_path)
        text = "\n".join(report.summary_lines())
        assert "files read: 1" in text
        assert "rejected: 1" in text
        assert "bad.vulnex.json" in text
