import os
import tempfile
from pathlib import Path


def atomic_write(path, data) -> Path:
    """Write bytes or text next to `path`, then move it into place."""
    path = Path(path)
    payload = data.encode('utf-8') if isinstance(data, str) else data
    directory = path.parent if str(path.parent) else Path('.')
    fd, tmp = tempfile.mkstemp(prefix=f'.{path.name}.', suffix='.tmp', dir=directory)
    try:
        with os.fdopen(fd, 'wb') as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path
