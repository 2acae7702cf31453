"""
Report archive: every run's JSON report in a small sqlite database
"""
import asyncio
import json
from pathlib import Path
from typing import Any, Dict, List, Optional

import aiosqlite
from loguru import logger

from config import config
from core.reports import RunReport


class ReportArchive:
    def __init__(self, db_path: str = None):
        self.db_path = db_path or config.archive.path
        Path(self.db_path).parent.mkdir(parents=True, exist_ok=True)
        self.connection: Optional[aiosqlite.Connection] = None

    async def initialize(self):
        """Open the database and create the tables"""
        try:
            self.connection = await aiosqlite.connect(self.db_path, timeout=30.0)
            if config.archive.enable_wal:
                await self.connection.execute("PRAGMA journal_mode=WAL")
                await self.connection.execute("PRAGMA synchronous=NORMAL")
                await self.connection.execute("PRAGMA busy_timeout=30000")
            await self._create_tables()
            logger.info(f"Report archive initialized at {self.db_path}")
        except Exception as e:
            logger.error(f"Failed to initialize report archive: {e}")
            raise

    async def _create_tables(self):
        await self.connection.execute('''
            CREATE TABLE IF NOT EXISTS reports (
                id INTEGER PRIMARY KEY AUTOINCREMENT,
                verb TEXT NOT NULL,
                status TEXT NOT NULL,
                exit_code INTEGER NOT NULL,
                conductor INTEGER,
                budget INTEGER,
                algebra TEXT,
                polynomial TEXT,
                report_json TEXT NOT NULL,
                created_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP
            )
        ''')
        await self.connection.execute(
            'CREATE INDEX IF NOT EXISTS idx_reports_verb ON reports(verb, created_at)'
        )
        await self.connection.commit()

    async def save_report(self, report: RunReport) -> Optional[int]:
        """Store one report, returning its row id"""
        try:
            cursor = await self.connection.execute('''
                INSERT INTO reports (verb, status, exit_code, conductor, budget, algebra, polynomial,
                                     report_json, created_at)
                VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?)
            ''', (report.verb, report.status, report.exit_code, report.conductor, report.budget,
                  report.algebra, report.polynomial, report.to_json(), report.created_at))
            await self.connection.commit()
            logger.debug(f"Archived {report.verb} report as row {cursor.lastrowid}")
            return cursor.lastrowid
        except Exception as e:
            logger.error(f"Failed to archive {report.verb} report: {e}")
            return None

    async def recent_reports(self, limit: int = 20, verb: str = None) -> List[Dict[str, Any]]:
        """Newest first"""
        query = 'SELECT id, verb, status, exit_code, polynomial, created_at FROM reports'
        parameters: tuple = ()
        if verb:
            query += ' WHERE verb = ?'
            parameters = (verb,)
        query += ' ORDER BY id DESC LIMIT ?'
        cursor = await self.connection.execute(query, parameters + (limit,))
        rows = await cursor.fetchall()
        return [
            {"id": r[0], "verb": r[1], "status": r[2], "exit_code": r[3], "polynomial": r[4], "created_at": r[5]}
            for r in rows
        ]

    async def load_report(self, report_id: int) -> Optional[RunReport]:
        cursor = await self.connection.execute('SELECT report_json FROM reports WHERE id = ?', (report_id,))
        row = await cursor.fetchone()
        if not row:
            return None
        return RunReport.model_validate(json.loads(row[0]))

    async def close(self):
        if self.connection:
            try:
                await self.connection.commit()
                await self.connection.close()
            except Exception as e:
                logger.error(f"Error closing report archive: {e}")
            finally:
                self.connection = None
                logger.info("Report archive closed")


archive: Optional[ReportArchive] = None


async def init_archive(db_path: str = None) -> ReportArchive:
    """Open the global archive"""
    global archive
    archive = ReportArchive(db_path)
    await archive.initialize()
    return archive


async def close_archive():
    global archive
    if archive is not None:
        await archive.close()
        archive = None


def archive_report(report: RunReport, db_path: str = None) -> Optional[int]:
    """Synchronous wrapper for one-shot command-line runs"""
    async def _save():
        await init_archive(db_path)
        try:
            return await archive.save_report(report)
        finally:
            await close_archive()
    return asyncio.run(_save())


def list_reports(limit: int = 20, verb: str = None, db_path: str = None) -> List[Dict[str, Any]]:
    async def _list():
        await init_archive(db_path)
        try:
            return await archive.recent_reports(limit, verb)
        finally:
            await close_archive()
    return asyncio.run(_list())
