from fractions import Fraction

import pytest

from conerank.ranking import AlternativeSet
from conerank.store import (
    CsvError,
    RevisionConflictError,
    Store,
    UnknownDatasetError,
    parse_csv,
)


CSV_OK = "id,grade,credits\na,1.5,30\nb,2.25,45\nc,1/3,60\n"


class TestParseCsv:
    def test_basic(self):
        alts, labels, criteria = parse_csv(CSV_OK)
        assert alts.size == 3
        assert criteria == ("grade", "credits")
        assert alts.vector("a") == (Fraction(3, 2), Fraction(30))
        assert alts.vector("c")[0] == Fraction(1, 3)
        assert labels == {}

    def test_labels(self):
        text = "id,c1,c2,label\na,0,0,1\nb,1,1,0\nc,2,2,\n"
        alts, labels, _ = parse_csv(text)
        assert labels == {"a": "acceptable", "b": "unacceptable"}

    def test_duplicate_id_reports_row(self):
        text = "id,c1,c2\na,0,0\na,1,1\n"
        with pytest.raises(CsvError, match="row 3"):
            parse_csv(text)

    def test_non_numeric_reports_row_and_column(self):
        text = "id,c1,c2\na,0,0\nb,oops,1\n"
        with pytest.raises(CsvError, match="row 3.*c1"):
            parse_csv(text)

    def test_too_few_rows(self):
        with pytest.raises(CsvError):
            parse_csv("id,c1,c2\na,0,0\n")

    def test_too_few_criteria(self):
        with pytest.raises(CsvError):
            parse_csv("id,c1\na,0\nb,1\n")

    def test_bad_label(self):
        text = "id,c1,c2,label\na,0,0,yes\nb,1,1,\n"
        with pytest.raises(CsvError, match="label"):
            parse_csv(text)


class TestStore:
    def test_roundtrip_preserves_exact_coordinates(self, tmp_path):
        store = Store(tmp_path)
        ds = store.ingest_csv(CSV_OK)
        back = store.get(ds.dataset_id)
        assert back.alternatives.vector("c")[0] == Fraction(1, 3)
        assert back.alternatives.vector("a") == (Fraction(3, 2), Fraction(30))
        assert back.criteria == ("grade", "credits")

    def test_idempotent_ingest(self, tmp_path):
        store = Store(tmp_path)
        a = store.ingest_csv(CSV_OK)
        b = store.ingest_csv(CSV_OK)
        assert a.dataset_id == b.dataset_id and b.revision == 1

    def test_revisions_append(self, tmp_path):
        store = Store(tmp_path)
        ds = store.ingest_csv(CSV_OK)
        bigger = AlternativeSet.from_rows(
            [(p.id, p.coords) for p in ds.alternatives.points] + [("d", (5, 5))]
        )
        newds = store.commit_revision(ds.dataset_id, bigger, {}, expect_revision=1)
        assert newds.revision == 2
        assert store.latest_revision(ds.dataset_id) == 2
        # the old revision is still readable
        old = store.get(ds.dataset_id, 1)
        assert old.alternatives.size == 3

    def test_conflicting_commit_rejected(self, tmp_path):
        store = Store(tmp_path)
        ds = store.ingest_csv(CSV_OK)
        with pytest.raises(RevisionConflictError):
            store.commit_revision(ds.dataset_id, ds.alternatives, {}, expect_revision=7)

    def test_unknown_dataset(self, tmp_path):
        store = Store(tmp_path)
        with pytest.raises(UnknownDatasetError):
            store.get("missing")

    def test_list(self, tmp_path):
        store = Store(tmp_path)
        ds = store.ingest_csv(CSV_OK)
        assert store.list_datasets() == [ds.dataset_id]
