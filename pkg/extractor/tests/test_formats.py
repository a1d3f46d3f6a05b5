import io
import json
import struct

import numpy as np
import pytest

from redparse_extractor.formats import DumpWriter, read_manifest


def test_read_manifest():
    lines = [
        json.dumps({"sent_index": 0, "sent_id": "a", "span": None, "words": ["x", "y"]}),
        json.dumps({"sent_index": 0, "sent_id": "a", "span": [1, 1], "words": ["x"]}),
        "",
    ]
    entries = read_manifest(lines)
    assert len(entries) == 2
    assert entries[0].span is None and entries[0].words == ("x", "y")
    assert entries[1].span == (1, 1)


def test_dump_writer_layout():
    buf = io.BytesIO()
    writer = DumpWriter(buf, dim=3)
    writer.write(7, None, np.arange(6, dtype=np.float32).reshape(2, 3))
    writer.write(7, (0, 1), np.zeros((1, 3), dtype=np.float32))
    data = buf.getvalue()
    magic, version, dim = struct.unpack_from("<4sII", data, 0)
    assert magic == b"RDCB" and version == 1 and dim == 3
    sent, start, length, n_words = struct.unpack_from("<IiII", data, 12)
    assert (sent, start, length, n_words) == (7, -1, 0, 2)
    rows = np.frombuffer(data, dtype="<f4", count=6, offset=28)
    assert rows.tolist() == [0, 1, 2, 3, 4, 5]
    sent2, start2, length2, n2 = struct.unpack_from("<IiII", data, 28 + 24)
    assert (sent2, start2, length2, n2) == (7, 0, 1, 1)
    assert len(data) == 12 + (16 + 24) + (16 + 12)


def test_dump_writer_rejects_wrong_width():
    writer = DumpWriter(io.BytesIO(), dim=4)
    with pytest.raises(ValueError):
        writer.write(0, None, np.zeros((2, 3), dtype=np.float32))
