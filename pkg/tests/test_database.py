import asyncio
from pathlib import Path

from core.commands import Command, run
from core.database import ReportArchive, archive_report, list_reports

M2Z2 = str(Path(__file__).resolve().parent.parent / "specs" / "m2z2.spec")


def test_archive_and_list(tmp_path):
    db = str(tmp_path / "reports.db")
    _, classified = run(Command(verb="classify", algebra=M2Z2))
    _, checked = run(Command(verb="check-identity", algebra=M2Z2, polynomials=["[x1, x2]"]))
    assert archive_report(classified, db) == 1
    assert archive_report(checked, db) == 2
    rows = list_reports(db_path=db)
    assert [r["verb"] for r in rows] == ["check-identity", "classify"]
    assert rows[0]["polynomial"] == "x1*x2 - x2*x1"
    assert [r["id"] for r in list_reports(verb="classify", db_path=db)] == [1]


def test_load_report_round_trip(tmp_path):
    """Test a stored report comes back field for field"""
    _, report = run(Command(verb="classify", algebra=M2Z2))

    async def scenario():
        archive = ReportArchive(str(tmp_path / "nested" / "reports.db"))
        await archive.initialize()
        try:
            row = await archive.save_report(report)
            return await archive.load_report(row), await archive.load_report(row + 1)
        finally:
            await archive.close()

    loaded, missing = asyncio.run(scenario())
    assert loaded.model_dump() == report.model_dump()
    assert missing is None


def test_history_verb(tmp_path):
    db = str(tmp_path / "reports.db")
    _, report = run(Command(verb="classify", algebra=M2Z2))
    archive_report(report, db)
    code, history = run(Command(verb="history", archive_path=db, limit=5))
    assert code == 0
    assert history.details["reports"][0]["status"] == "Fails"
