"""
Bookmark Log - Line-Delimited JSON Codec
One record per line: {"ts":...,"user":...,"url":...,"tags":[...]}
"""

import json
import logging
from pathlib import Path
from typing import Iterable, Iterator, List, Union

from pydantic import ValidationError

from collab_tagging_simulator.core.data_models import Bookmark, BookmarkLogRecord, parse_timestamp
from collab_tagging_simulator.core.exceptions import LogParseError

logger = logging.getLogger(__name__)


def _first_error(exc: ValidationError) -> str:
    error = exc.errors()[0]
    location = ".".join(str(part) for part in error.get("loc", ())) or "record"
    return f"{location}: {error.get('msg', 'invalid')}"


class BookmarkLogReader:
    """
    Parses bookmark logs

    Lenient mode skips malformed lines and keeps the first occurrence of a
    repeated tag; strict mode raises LogParseError on the first problem.
    """

    def __init__(self, strict: bool = False, normalize_case: bool = False):
        """
        Initialize reader

        Args:
            strict: Fail on the first malformed line
            normalize_case: Lowercase tags before the duplicate check
        """
        self.strict = strict
        self.normalize_case = normalize_case
        self.lines_read = 0
        self.skipped_lines = 0
        self.deduplicated_lines = 0

    def _reject(self, line_number: int, reason: str) -> None:
        if self.strict:
            raise LogParseError(line_number, reason)
        self.skipped_lines += 1
        logger.warning(f"Skipping malformed log line {line_number}: {reason}")

    def _parse_line(self, line_number: int, line: str) -> Union[Bookmark, None]:
        try:
            record = BookmarkLogRecord.model_validate_json(line)
        except ValidationError as exc:
            self._reject(line_number, _first_error(exc))
            return None

        tags = [tag.lower() for tag in record.tags] if self.normalize_case else list(record.tags)
        if any(not tag for tag in tags):
            self._reject(line_number, "empty tag token")
            return None

        unique = list(dict.fromkeys(tags))
        if len(unique) != len(tags):
            if self.strict:
                raise LogParseError(line_number, f"duplicate tags {tags}")
            self.deduplicated_lines += 1
            logger.warning(f"Line {line_number}: dropped repeated tags, kept {unique}")

        try:
            timestamp = parse_timestamp(record.ts, strict=self.strict)
        except ValueError as exc:
            self._reject(line_number, f"ts: {exc}")
            return None

        return Bookmark(user=record.user, url=record.url, timestamp=timestamp, tags=tuple(unique))

    def iter_bookmarks(self, lines: Iterable[Union[str, bytes]]) -> Iterator[Bookmark]:
        """Parse lines in order; bytes lines are decoded as UTF-8 one at a time"""
        for line_number, raw in enumerate(lines, start=1):
            if isinstance(raw, bytes):
                try:
                    raw = raw.decode("utf-8")
                except UnicodeDecodeError as e:
                    self.lines_read += 1
                    self._reject(line_number, f"invalid UTF-8 at byte {e.start}")
                    continue
            line = raw.rstrip("\r\n")
            if not line.strip():
                continue
            self.lines_read += 1
            bookmark = self._parse_line(line_number, line)
            if bookmark is not None:
                yield bookmark

    def read(self, lines: Iterable[Union[str, bytes]]) -> List[Bookmark]:
        bookmarks = list(self.iter_bookmarks(lines))
        if self.skipped_lines or self.deduplicated_lines:
            logger.info(
                f"Parsed {len(bookmarks)} bookmarks "
                f"({self.skipped_lines} lines skipped, {self.deduplicated_lines} deduplicated)"
            )
        return bookmarks

    def read_file(self, path: Path) -> List[Bookmark]:
        with open(path, "rb") as f:
            return self.read(f)


def parse_bookmark_log(lines: Iterable[str], strict: bool = False, normalize_case: bool = False) -> List[Bookmark]:
    """Parse log lines into bookmarks in file order"""
    return BookmarkLogReader(strict=strict, normalize_case=normalize_case).read(lines)


def format_record(bookmark: Bookmark) -> str:
    """Canonical log line, newline included"""
    record = BookmarkLogRecord.from_bookmark(bookmark)
    return json.dumps(record.model_dump(), ensure_ascii=False, separators=(",", ":")) + "\n"


def write_bookmark_log(bookmarks: Iterable[Bookmark]) -> Iterator[str]:
    """Serialize bookmarks as canonical log lines"""
    for bookmark in bookmarks:
        yield format_record(bookmark)


def save_bookmark_log(path: Path, bookmarks: Iterable[Bookmark]) -> int:
    """Write a log file; returns the number of records written"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for line in write_bookmark_log(bookmarks):
            f.write(line)
            count += 1
    logger.info(f"Wrote {count} bookmarks to {path}")
    return count


def load_bookmark_log(path: Path, strict: bool = False, normalize_case: bool = False) -> List[Bookmark]:
    return BookmarkLogReader(strict=strict, normalize_case=normalize_case).read_file(Path(path))
