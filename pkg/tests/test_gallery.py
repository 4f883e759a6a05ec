import pytest

from cychom import acceptance, gallery
from cychom.cli import main


@pytest.mark.parametrize("name", sorted(gallery.GALLERY))
def test_entry_reproduces_expected_values(name):
    results = gallery.run_entry(name)
    assert results
    failed = [(r["check"], r["expected"], r["got"], r.get("error")) for r in results if not r["passed"]]
    assert not failed


def test_provenance_tags():
    for entry in gallery.ENTRIES:
        assert entry.pointer
        for check in entry.checks:
            assert check.source in ("known", "trivial", "derived")
            if check.source == "derived":
                assert check.oracle, (entry.name, check.name)


def test_finite_entries_are_finite():
    for name in gallery.FINITE:
        assert gallery.GALLERY[name].algebra().is_finite


def test_gallery_all_is_the_acceptance_suite(monkeypatch, capsys):
    calls = []

    def fake():
        calls.append(1)
        return {"passed": False, "criteria": []}

    monkeypatch.setattr(acceptance, "run_all", fake)
    assert main(["gallery", "--all"]) == 1
    assert calls == [1]
    assert [k for k, _, _ in acceptance.CRITERIA] == list(range(1, 14))
