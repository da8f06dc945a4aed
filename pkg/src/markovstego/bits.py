"""Bit strings are plain ``str`` of '0'/'1', most-significant bit first."""


def bytes_to_bits(data: bytes) -> str:
    if not data:
        return ""
    return format(int.from_bytes(data, "big"), f"0{8 * len(data)}b")


def bits_to_bytes(bits: str) -> bytes:
    if len(bits) % 8:
        raise ValueError(f"bit count {len(bits)} is not a multiple of 8")
    if not bits:
        return b""
    return int(bits, 2).to_bytes(len(bits) // 8, "big")


def uint_to_bits(value: int, width: int) -> str:
    if value < 0 or value >= 1 << width:
        raise ValueError(f"{value} does not fit in {width} bits")
    return format(value, f"0{width}b") if width else ""


class BitReader:
    """Sequential reader over a bit string that reads 0 once exhausted."""

    def __init__(self, bits: str, pos: int = 0):
        self.bits = bits
        self.pos = pos

    def __len__(self):
        return len(self.bits)

    @property
    def exhausted(self) -> bool:
        return self.pos >= len(self.bits)

    def read(self) -> int:
        """Next bit, or 0 past the end. Only real bits advance ``pos``."""
        if self.pos < len(self.bits):
            bit = self.bits[self.pos]
            self.pos += 1
            return 1 if bit == "1" else 0
        return 0
