"""
Unit tests for logging configuration
"""

import logging

from src.logger import setup_logger


class TestSetupLogger:
    """Test setup_logger"""

    def test_console_uses_stderr(self, capsys):
        """Test that log records never mix with reports on stdout"""
        log = setup_logger('trimetric.test.console', level='info', log_file=None)
        log.info("suite started")
        captured = capsys.readouterr()
        assert captured.out == ''
        assert 'INFO - suite started' in captured.err
        assert not log.propagate

    def test_file_receives_debug(self, tmp_path, capsys):
        """Test the optional file handler"""
        path = tmp_path / 'run.log'
        log = setup_logger('trimetric.test.file', level='DEBUG', log_file=str(path))
        log.debug("contact table built")
        for handler in log.handlers:
            handler.flush()
            if isinstance(handler, logging.FileHandler):
                handler.close()
        assert 'trimetric.test.file - DEBUG - contact table built' in path.read_text()
        assert 'contact table built' not in capsys.readouterr().err

    def test_unknown_level_falls_back_to_info(self):
        """Test level parsing"""
        log = setup_logger('trimetric.test.level', level='chatty', log_file=None)
        assert log.level == logging.INFO

    def test_repeated_setup_replaces_handlers(self):
        """Test that handlers are not stacked"""
        setup_logger('trimetric.test.repeat', log_file=None)
        log = setup_logger('trimetric.test.repeat', log_file=None)
        assert len(log.handlers) == 1
