"""Row cells (histogram, strip, matrix), filtering, sorting, and
pseudonymization."""

from __future__ import annotations

import random

import pytest

from factories import brute_quadruples, make_doc, make_library, random_org
from vulnex.analytics import (
    CveMatrix,
    FilterSpec,
    SortDirection,
    SortKey,
    SortSpec,
    apply_filters,
    cve_matrix,
    default_direction,
    default_matrix_columns,
    link_count,
    pseudonymize,
    pseudonymize_documents,
    read_mapping,
    score_strip,
    severity_histogram,
    sort_rows,
    vuln_count,
    write_mapping,
)
from vulnex.analytics.pseudonyms import _load_words, _make_name_map
from vulnex.errors import CapacityError, UnknownEntityError, ValidationError
from vulnex.graph import EntityKind, EntityRef, Ordering, build_graph
from vulnex.ingest import ScanDocument
from vulnex.model import Module, Repository, Vulnerability


@pytest.fixture()
def spread_graph():
    """One library with scores {2.0, 5.0, 5.5, 9.8} plus one unscored."""
    lib = make_library("spread")
    doc = make_doc(
        "r1",
        modules=[("r1.m", None)],
        libraries=[lib],
        vulnerabilities=[
            Vulnerability("CVE-2020-0001", 2.0),
            Vulnerability("CVE-2020-0002", 5.0),
            Vulnerability("CVE-2020-0003", 5.5),
            Vulnerability("CVE-2020-0004", 9.8),
            Vulnerability("CVE-2020-0005", None),
        ],
        dependencies=[("r1.m", lib.digest)],
        affects=[(lib.digest, c) for c in
                 ("CVE-2020-0001", "CVE-2020-0002", "CVE-2020-0003", "CVE-2020-0004",
                  "CVE-2020-0005")],
    )
    return build_graph([doc]), lib


class TestHistogram:
    def test_bucket_spread(self, spread_graph):
        g, lib = spread_graph
        h = severity_histogram(g, EntityRef(EntityKind.LIBRARY, lib.digest))
        assert (h.low, h.medium, h.high, h.critical, h.unscored) == (1, 2, 0, 1, 1)
        assert h.scored_total == 4
        assert h.total == 5

    def test_counts_distinct_cves_not_paths(self, org_graph):
        # activemq-all: 1 low, 14 medium, 3 high, 2 critical over 20 repos
        digest = next(d for d, l in org_graph.libraries.items() if l.artifact == "activemq-all")
        h = severity_histogram(org_graph, EntityRef(EntityKind.LIBRARY, digest))
        assert (h.low, h.medium, h.high, h.critical, h.unscored) == (1, 14, 3, 2, 0)

    @pytest.mark.parametrize("seed", range(3))
    def test_sums_match_vuln_count(self, seed):
        g = build_graph(random_org(random.Random(seed)))
        for repo_id in g.repositories:
            ref = EntityRef(EntityKind.REPOSITORY, repo_id)
            assert severity_histogram(g, ref).total == vuln_count(g, ref)


class TestScoreStrip:
    def test_ascending_scored_only(self, spread_graph):
        g, lib = spread_graph
        strip = score_strip(g, EntityRef(EntityKind.LIBRARY, lib.digest))
        assert [e.score for e in strip.entries] == [2.0, 5.0, 5.5, 9.8]
        assert strip.min_score == 2.0
        assert strip.max_score == 9.8
        assert all(e.cve_id != "CVE-2020-0005" for e in strip.entries)

    def test_equal_scores_tie_break_on_id(self, org_graph):
        digest = next(d for d, l in org_graph.libraries.items() if l.artifact == "activemq-all")
        strip = score_strip(org_graph, EntityRef(EntityKind.LIBRARY, digest))
        keys = [(e.score, e.cve_id) for e in strip.entries]
        assert keys == sorted(keys)
        assert len(strip.entries) == 20

    def test_empty_strip(self, org_graph):
        digest = next(d for d, l in org_graph.libraries.items() if l.artifact == "guava")
        strip = score_strip(org_graph, EntityRef(EntityKind.LIBRARY, digest))
        assert strip.entries == ()
        assert strip.min_score is None and strip.max_score is None


class TestMatrix:
    def test_default_columns_on_corpus(self, org_graph):
        assert default_matrix_columns(org_graph) == (
            "CVE-2009-2625",   # 27 repos
            "CVE-2018-1270",   # 20 repos, 9.8
            "CVE-2018-1275",   # 20 repos, 9.8
            "CVE-2019-72003",  # 20 repos, 8.8
            "CVE-2019-72002",  # 20 repos, 8.1
        )

    def test_k_clamps(self, spread_graph):
        g, _ = spread_graph
        assert len(default_matrix_columns(g, k=100)) == 5
        assert len(default_matrix_columns(g, k=2)) == 2

    def test_cells_match_membership(self, org_graph):
        columns = default_matrix_columns(org_graph)
        rows = [EntityRef(EntityKind.REPOSITORY, r) for r in sorted(org_graph.repositories)]
        matrix = cve_matrix(org_graph, rows, columns)
        assert isinstance(matrix, CveMatrix)
        for ref, row_cells in zip(matrix.rows, matrix.cells):
            vulns = org_graph.vulns_of(ref)
            assert row_cells == tuple(c in vulns for c in columns)

    def test_unknown_column_raises(self, org_graph):
        rows = [EntityRef(EntityKind.REPOSITORY, next(iter(org_graph.repositories)))]
        with pytest.raises(UnknownEntityError):
            cve_matrix(org_graph, rows, ["CVE-1999-0000"])


class TestFilterSpec:
    def test_empty(self):
        assert FilterSpec().is_empty()
        assert not FilterSpec(name_query="x").is_empty()

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"min_cvss": -0.1},
            {"max_cvss": 10.1},
            {"min_cvss": 8.0, "max_cvss": 2.0},
            {"min_dependencies": -1},
            {"min_vulnerabilities": 5, "max_vulnerabilities": 1},
            {"min_dependencies": 3, "max_dependencies": 2},
        ],
    )
    def test_invalid_specs(self, kwargs):
        with pytest.raises(ValidationError):
            FilterSpec(**kwargs)


class TestApplyFilters:
    def test_empty_spec_returns_same_tree(self, org_graph):
        tree = org_graph.tree(Ordering.REPOSITORY_CENTERED)
        assert apply_filters(tree, FilterSpec()) is tree

    def test_name_query_casefolds_and_applies_to_roots_only(self, org_graph):
        tree = org_graph.tree(Ordering.REPOSITORY_CENTERED)
        out = apply_filters(tree, FilterSpec(name_query="MARMOSET"))
        assert {r.name for r in out.roots} == {"low-marmoset", "sunny-marmoset"}
        assert [r.name for r in apply_filters(tree, FilterSpec(name_query="low-ma")).roots] == [
            "low-marmoset"
        ]
        # "satisfactory-haddock" is a module name; no root matches it
        assert apply_filters(tree, FilterSpec(name_query="haddock")).roots == ()

    def test_min_cvss_excludes_unscored_rows(self, org_graph):
        tree = org_graph.tree(Ordering.BUG_CENTERED)
        out = apply_filters(tree, FilterSpec(min_cvss=0.1))
        ids = {r.entity_id for r in out.roots}
        assert "CVE-2019-74001" not in ids  # no score at all
        assert "CVE-2019-74002" not in ids  # scored 0.0
        assert len(out.roots) == len(tree.roots) - 2

    def test_max_cvss_keeps_unscored_rows(self, org_graph):
        tree = org_graph.tree(Ordering.BUG_CENTERED)
        out = apply_filters(tree, FilterSpec(max_cvss=4.0))
        ids = {r.entity_id for r in out.roots}
        assert "CVE-2019-74001" in ids
        assert "CVE-2019-74002" in ids
        assert "CVE-2018-1270" not in ids
        assert "CVE-2019-70001" in ids  # 3.3

    def test_cvss_band(self, org_graph):
        tree = org_graph.tree(Ordering.BUG_CENTERED)
        out = apply_filters(tree, FilterSpec(min_cvss=9.0, max_cvss=9.7))
        assert [r.entity_id for r in out.roots] == ["CVE-2016-6814"]  # the lone 9.6

    def test_dependency_bounds_on_repositories(self, org_graph):
        tree = org_graph.tree(Ordering.REPOSITORY_CENTERED)
        out = apply_filters(tree, FilterSpec(min_dependencies=5))
        for root in out.roots:
            assert org_graph.dependency_count_of(root.ref) >= 5

    def test_counts_not_applicable_pass(self, org_graph):
        # bug roots have no dependency or vulnerability cells; the bounds
        # must not reject them
        tree = org_graph.tree(Ordering.BUG_CENTERED)
        out = apply_filters(tree, FilterSpec(min_dependencies=99, min_vulnerabilities=99))
        assert len(out.roots) == len(tree.roots)

    def test_vulnerability_bounds(self, org_graph):
        tree = org_graph.tree(Ordering.REPOSITORY_CENTERED)
        out = apply_filters(tree, FilterSpec(max_vulnerabilities=0))
        assert sorted(r.name for r in out.roots) == ["humble-tapir", "modest-gannet"]

    def test_hide_vulnerability_free_prunes_deep(self, org_graph):
        tree = org_graph.tree(Ordering.REPOSITORY_CENTERED)
        out = apply_filters(tree, FilterSpec(hide_vulnerability_free=True))
        names = {r.name for r in out.roots}
        assert "humble-tapir" not in names and "modest-gannet" not in names

        def check(node):
            if node.kind in (EntityKind.REPOSITORY, EntityKind.MODULE):
                assert node.vuln_count > 0
            for child in node.children:
                check(child)

        for root in out.roots:
            check(root)

    def test_hide_unscored_prunes_bug_rows_everywhere(self, org_graph):
        tree = org_graph.tree(Ordering.LIBRARY_CENTERED)
        out = apply_filters(tree, FilterSpec(hide_unscored=True))

        def check(node):
            if node.kind is EntityKind.BUG:
                assert node.branch_max_tenths > 0
            for child in node.children:
                check(child)

        for root in out.roots:
            check(root)
        beanutils = next(r for r in out.roots if r.name == "commons-beanutils")
        assert beanutils.children == ()  # lone finding was unscored

    def test_filters_only_remove_rows(self, org_graph):
        tree = org_graph.tree(Ordering.REPOSITORY_CENTERED)
        all_ids = {r.entity_id for r in tree.roots}
        specs = [
            FilterSpec(min_cvss=5.0),
            FilterSpec(max_dependencies=3),
            FilterSpec(name_query="e"),
            FilterSpec(hide_vulnerability_free=True, hide_unscored=True),
        ]
        for spec in specs:
            out = apply_filters(tree, spec)
            assert {r.entity_id for r in out.roots} <= all_ids

    def test_tightening_min_cvss_shrinks_monotonically(self, org_graph):
        tree = org_graph.tree(Ordering.BUG_CENTERED)
        previous = None
        for threshold in (0.0, 2.0, 4.0, 7.0, 9.0, 10.0):
            ids = {r.entity_id for r in apply_filters(tree, FilterSpec(min_cvss=threshold)).roots}
            if previous is not None:
                assert ids <= previous
            previous = ids


class TestSorting:
    def test_default_directions(self):
        assert default_direction(SortKey.NAME) is SortDirection.ASC
        for key in (SortKey.MOST_SEVERE, SortKey.VULNERABILITY_COUNT, SortKey.LINK_COUNT):
            assert default_direction(key) is SortDirection.DESC

    def test_name_sort(self, org_graph):
        tree = org_graph.tree(Ordering.REPOSITORY_CENTERED)
        out = sort_rows(tree, SortSpec(SortKey.NAME, SortDirection.ASC))
        names = [r.name for r in out.roots]
        assert names == sorted(names, key=str.casefold)
        flipped = sort_rows(tree, SortSpec(SortKey.NAME, SortDirection.DESC))
        assert [r.name for r in flipped.roots] == list(reversed(names))

    def test_most_severe_puts_argmax_first(self, org_graph):
        tree = org_graph.tree(Ordering.REPOSITORY_CENTERED)
        out = sort_rows(tree, SortSpec(SortKey.MOST_SEVERE, SortDirection.DESC))
        assert out.roots[0].branch_max_tenths == max(r.branch_max_tenths for r in tree.roots)

    def test_vulnerability_count_descends(self, org_graph):
        tree = org_graph.tree(Ordering.REPOSITORY_CENTERED)
        out = sort_rows(tree, SortSpec(SortKey.VULNERABILITY_COUNT, SortDirection.DESC))
        counts = [r.vuln_count for r in out.roots]
        assert counts == sorted(counts, reverse=True)

    def test_numeric_ties_fall_back_to_name_ascending(self, org_graph):
        tree = org_graph.tree(Ordering.BUG_CENTERED)
        out = sort_rows(tree, SortSpec(SortKey.MOST_SEVERE, SortDirection.DESC))
        groups: dict[int, list[str]] = {}
        for row in out.roots:
            groups.setdefault(row.branch_max_tenths, []).append(row.name)
        for names in groups.values():
            assert names == sorted(names, key=str.casefold)

    def test_sort_applies_to_every_level(self, org_graph):
        tree = org_graph.tree(Ordering.REPOSITORY_CENTERED)
        out = sort_rows(tree, SortSpec(SortKey.NAME, SortDirection.ASC))

        def check(nodes):
            names = [n.name for n in nodes]
            assert names == sorted(names, key=str.casefold)
            for node in nodes:
                check(node.children)

        check(out.roots)

    def test_link_count_uses_visible_children(self, org_graph):
        tree = org_graph.tree(Ordering.LIBRARY_CENTERED)
        out = sort_rows(tree, SortSpec(SortKey.LINK_COUNT, SortDirection.DESC))
        counts = [link_count(r) for r in out.roots]
        assert counts == sorted(counts, reverse=True)


class TestPseudonyms:
    def test_name_map_is_injective_and_deterministic(self):
        names = [f"service-{i}" for i in range(500)]
        a = _make_name_map(names, seed=1)
        b = _make_name_map(names, seed=1)
        assert a == b
        assert len(set(a.values())) == len(names)
        c = _make_name_map(names, seed=2)
        assert c != a

    def test_capacity_error(self):
        adjectives = _load_words("adjectives.txt")
        animals = _load_words("animals.txt")
        capacity = len(adjectives) * len(animals)
        with pytest.raises(CapacityError):
            _make_name_map((f"n{i}" for i in range(capacity + 1)), seed=0)

    def test_graph_pseudonymization_preserves_structure(self, org_graph):
        renamed, mapping = pseudonymize(org_graph, seed=7)
        assert len(renamed.repositories) == len(org_graph.repositories)
        assert len(renamed.modules) == len(org_graph.modules)
        assert renamed.libraries == org_graph.libraries
        assert renamed.vulnerabilities == org_graph.vulnerabilities
        assert len(renamed.exposure_quadruples()) == len(org_graph.exposure_quadruples())
        assert all(r.source_url is None for r in renamed.repositories.values())
        originals = {r.name for r in org_graph.repositories.values()} | {
            m.name for m in org_graph.modules.values()
        }
        assert set(mapping) == originals
        for repo in renamed.repositories.values():
            assert repo.name not in originals

    def test_ids_stay_slash_free_and_unique(self, org_graph):
        renamed, _ = pseudonymize(org_graph, seed=7)
        ids = list(renamed.repositories) + list(renamed.modules)
        assert len(set(ids)) == len(ids)
        assert all("/" not in i for i in ids)

    def test_same_display_name_maps_to_same_pseudonym(self):
        # every repo has a module called "app"; the pseudonym must agree
        docs = [
            ScanDocument(
                repository=Repository(id=f"r{i}", name=f"repo{i}"),
                modules=(Module(id=f"r{i}.app", name="app", repository_id=f"r{i}"),),
                libraries=(),
                vulnerabilities=(),
                dependencies=(),
                affects=(),
                scan_timestamp="2020-01-01T00:00:00Z",
            )
            for i in range(3)
        ]
        g = build_graph(docs)
        renamed, mapping = pseudonymize(g, seed=3)
        module_names = {m.name for m in renamed.modules.values()}
        assert module_names == {mapping["app"]}
        # ids embed the repository pseudonym, so they stay distinct
        assert len(renamed.modules) == 3

    def test_document_and_graph_paths_agree(self, org_docs, org_graph):
        renamed_docs, map_docs = pseudonymize_documents(org_docs, seed=11)
        renamed_graph, map_graph = pseudonymize(org_graph, seed=11)
        assert map_docs == map_graph
        rebuilt = build_graph(renamed_docs)
        assert rebuilt.repositories == renamed_graph.repositories
        assert rebuilt.modules == renamed_graph.modules
        assert set(rebuilt.exposure_quadruples()) == set(renamed_graph.exposure_quadruples())

    def test_quadruple_structure_survives_renaming(self):
        rng = random.Random(99)
        docs = random_org(rng)
        renamed_docs, _ = pseudonymize_documents(docs, seed=5)
        # same multiset of (module depth, library, cve) once names are erased
        def shape(quads):
            return sorted((len(q[1]), q[2], q[3]) for q in quads)

        assert shape(brute_quadruples(docs)) == shape(brute_quadruples(renamed_docs))

    def test_mapping_file_round_trip(self, tmp_path):
        mapping = {"alpha": "brave-otter", "beta": "calm-wren", "with space": "icy-seal"}
        path = tmp_path / "names.txt"
        write_mapping(mapping, path)
        text = path.read_text("utf-8")
        assert text == "alpha\tbrave-otter\nbeta\tcalm-wren\nwith space\ticy-seal\n"
        assert read_mapping(path) == mapping
