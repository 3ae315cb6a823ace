"""
Report documents for compute, verify, sharpness and scan runs
"""

import csv
import io
import json
import os
import sys
from typing import Any, Dict, List, Optional

# Add project root to Python path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.errors import InvalidInputError
from src.logger import logger

OUTPUT_FORMATS = ('json', 'csv')


def flatten_record(record: Dict[str, Any], prefix: str = '') -> Dict[str, Any]:
    """Flatten nested dicts into '_'-joined columns; lists become ';'-joined cells"""
    flat = {}
    for key, value in record.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(flatten_record(value, f"{name}_"))
        elif isinstance(value, (list, tuple)):
            flat[name] = ';'.join(
                json.dumps(item, sort_keys=True) if isinstance(item, dict) else str(item) for item in value
            )
        else:
            flat[name] = value
    return flat


class RunReport:
    """Report document: {config, results, summary, violations}"""

    def __init__(self, command: str, config: Optional[Dict[str, Any]] = None):
        self.command = command
        self.config = dict(config or {})
        self.results: List[Dict[str, Any]] = []
        self.summary: Dict[str, Any] = {}
        self.violations: List[Dict[str, Any]] = []

    def add_result(self, record: Dict[str, Any]):
        self.results.append(record)

    def add_violation(self, record: Dict[str, Any]):
        self.violations.append(record)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> Dict[str, Any]:
        return {
            'config': self.config,
            'results': self.results,
            'summary': self.summary,
            'violations': self.violations,
        }

    def to_json(self) -> str:
        # float repr is the shortest string that round-trips, at most 17 significant digits
        return json.dumps(self.to_dict(), indent=2, allow_nan=False)

    def to_csv(self) -> str:
        """Results as rows; columns in first-seen order"""
        rows = [flatten_record(record) for record in self.results]
        columns = []
        for row in rows:
            for name in row:
                if name not in columns:
                    columns.append(name)
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator='\n')
        writer.writeheader()
        writer.writerows(rows)
        return buffer.getvalue()

    def render(self, output_format: str = 'json') -> str:
        if output_format == 'json':
            return self.to_json() + '\n'
        if output_format == 'csv':
            return self.to_csv()
        raise InvalidInputError(f"Unknown output format: {output_format}")

    def export(self, output_format: str = 'json', filename: Optional[str] = None) -> Optional[str]:
        """Write the rendered report to filename, or to stdout when no filename is given"""
        text = self.render(output_format)
        if filename is None:
            sys.stdout.write(text)
            sys.stdout.flush()
            return None
        with open(filename, 'w', newline='') as f:
            f.write(text)
        logger.info(f"Exported {self.command} report ({len(self.results)} result(s)) to {filename}")
        return filename

    def get_statistics(self) -> Dict[str, Any]:
        """Counts for log output"""
        return {
            'command': self.command,
            'results': len(self.results),
            'violations': len(self.violations),
            'passed': self.passed,
        }
