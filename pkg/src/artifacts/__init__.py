"""Result tables, config snapshots and distribution files."""
