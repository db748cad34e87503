"""NMEA 0183 AIVDM sentence parsing and AIS payload decoding.

Supports position reports (message types 1/2/3) and static voyage data
(type 5). Everything else is counted and skipped. Payload bits are handled
as '0'/'1' strings: desk-scale throughput makes clarity the better trade.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional


class AisError(ValueError):
    pass


class ChecksumMismatch(AisError):
    pass


class MalformedField(AisError):
    pass


class InvalidArmorCharacter(AisError):
    pass


class UnsupportedMessageType(AisError):
    pass


class TruncatedPayload(AisError):
    pass


@dataclass(frozen=True)
class RawSentence:
    talker_payload: str
    fragment_count: int
    fragment_number: int
    sequence_id: Optional[int]
    channel: str
    armored_payload: str
    fill_bits: int
    checksum: str

    @property
    def complete(self) -> bool:
        return self.fragment_count == 1


@dataclass(frozen=True)
class AisPositionReport:
    mmsi: int
    timestamp: float          # UTC seconds, supplied by the ingest clock
    lat: Optional[float]      # None = position unavailable
    lon: Optional[float]
    sog: Optional[float]      # knots; None = unavailable
    cog: Optional[float]      # degrees true; None = unavailable
    heading: Optional[float]  # degrees true; None = unavailable

    @property
    def has_position(self) -> bool:
        return self.lat is not None and self.lon is not None


@dataclass(frozen=True)
class AisStaticReport:
    mmsi: int
    vessel_name: str
    ship_type: int
    callsign: str


def nmea_checksum(body: str) -> str:
    """XOR of all characters, as two uppercase hex digits."""
    x = 0
    for ch in body:
        x ^= ord(ch)
    return f"{x:02X}"


def parse_sentence(line: str) -> RawSentence:
    line = line.strip()
    if not line.startswith("!") or "*" not in line:
        raise MalformedField(f"not an AIVDM sentence: {line!r}")
    body, _, tail = line[1:].rpartition("*")
    checksum = tail[:2]
    if len(checksum) != 2 or any(c not in "0123456789ABCDEFabcdef" for c in checksum):
        raise MalformedField(f"bad checksum field: {tail!r}")
    if nmea_checksum(body) != checksum.upper():
        raise ChecksumMismatch(f"checksum mismatch on {line!r}")
    fields = body.split(",")
    if len(fields) != 7:
        raise MalformedField(f"expected 7 fields, got {len(fields)}")
    talker, cnt_s, num_s, seq_s, channel, payload, fill_s = fields
    if talker not in ("AIVDM", "AIVDO"):
        raise MalformedField(f"unsupported talker {talker!r}")
    try:
        fragment_count = int(cnt_s)
        fragment_number = int(num_s)
        fill_bits = int(fill_s)
    except ValueError as e:
        raise MalformedField(str(e)) from None
    sequence_id = None
    if seq_s:
        try:
            sequence_id = int(seq_s)
        except ValueError:
            raise MalformedField(f"bad sequence id {seq_s!r}") from None
    if fragment_count < 1 or not 1 <= fragment_number <= fragment_count:
        raise MalformedField(f"bad fragment indices {fragment_number}/{fragment_count}")
    if not 0 <= fill_bits <= 5:
        raise MalformedField(f"fill bits out of range: {fill_bits}")
    return RawSentence(talker, fragment_count, fragment_number, sequence_id,
                       channel, payload, fill_bits, checksum.upper())


def dearmor_payload(armored: str, fill_bits: int) -> str:
    """6-bit de-armoring: each char contributes 6 bits MSB-first, minus fill."""
    bits = []
    for ch in armored:
        code = ord(ch)
        if not (48 <= code <= 87 or 96 <= code <= 119):
            raise InvalidArmorCharacter(f"invalid armor character {ch!r}")
        v = code - 48
        if v > 40:
            v -= 8
        bits.append(f"{v:06b}")
    s = "".join(bits)
    if fill_bits:
        s = s[:-fill_bits] if fill_bits <= len(s) else ""
    return s


class FragmentAssembler:
    """Reassembles multi-fragment sentence groups for one input stream.

    Partial groups older than `timeout_s` are discarded; discards are
    reported via the `timeouts` counter, never as a hard failure.
    """

    def __init__(self, timeout_s: float = 30.0):
        self.timeout_s = timeout_s
        self.timeouts = 0
        self._groups: dict[tuple, dict] = {}

    def add(self, sentence: RawSentence, received_at: float) -> list[str]:
        """Feed one sentence; returns payload bit strings for completed messages."""
        self._expire(received_at)
        if sentence.fragment_count == 1:
            return [dearmor_payload(sentence.armored_payload, sentence.fill_bits)]
        key = (sentence.sequence_id, sentence.channel, sentence.fragment_count)
        group = self._groups.setdefault(key, {"parts": {}, "first_at": received_at})
        group["parts"][sentence.fragment_number] = sentence
        if len(group["parts"]) == sentence.fragment_count:
            del self._groups[key]
            bits = []
            for i in range(1, sentence.fragment_count + 1):
                part = group["parts"][i]
                bits.append(dearmor_payload(part.armored_payload, part.fill_bits))
            return ["".join(bits)]
        return []

    def _expire(self, now: float):
        stale = [k for k, g in self._groups.items() if now - g["first_at"] > self.timeout_s]
        for k in stale:
            del self._groups[k]
            self.timeouts += 1


def _uint(bits: str, start: int, length: int) -> int:
    return int(bits[start:start + length], 2)


def _sint(bits: str, start: int, length: int) -> int:
    v = _uint(bits, start, length)
    if bits[start] == "1":
        v -= 1 << length
    return v


def message_type(bits: str) -> int:
    if len(bits) < 6:
        raise TruncatedPayload("payload shorter than the type field")
    return _uint(bits, 0, 6)


# Unavailable-value sentinels from the public AIS standard.
SOG_UNAVAILABLE = 1023
COG_UNAVAILABLE = 3600
HEADING_UNAVAILABLE = 511
LON_UNAVAILABLE = 181 * 600_000   # 1/10000 arcmin units
LAT_UNAVAILABLE = 91 * 600_000


def decode_position_report(bits: str, received_at: float) -> AisPositionReport:
    """Decode a type 1/2/3 position report. Timestamp comes from the ingest clock."""
    mtype = message_type(bits)
    if mtype not in (1, 2, 3):
        raise UnsupportedMessageType(f"not a position report: type {mtype}")
    if len(bits) < 137:
        raise TruncatedPayload(f"position report needs >=137 bits, got {len(bits)}")
    mmsi = _uint(bits, 8, 30)
    if mmsi <= 0:
        raise MalformedField("mmsi must be positive")
    raw_sog = _uint(bits, 50, 10)
    raw_lon = _sint(bits, 61, 28)
    raw_lat = _sint(bits, 89, 27)
    raw_cog = _uint(bits, 116, 12)
    raw_hdg = _uint(bits, 128, 9)

    sog = None if raw_sog == SOG_UNAVAILABLE else raw_sog / 10.0
    cog = None if raw_cog >= COG_UNAVAILABLE else raw_cog / 10.0
    heading = None if raw_hdg == HEADING_UNAVAILABLE else float(raw_hdg)
    lon = None if raw_lon == LON_UNAVAILABLE else raw_lon / 600_000.0
    lat = None if raw_lat == LAT_UNAVAILABLE else raw_lat / 600_000.0
    if lat is not None and not -90.0 <= lat <= 90.0:
        raise MalformedField(f"decoded latitude out of bounds: {lat}")
    if lon is not None and not -180.0 <= lon <= 180.0:
        raise MalformedField(f"decoded longitude out of bounds: {lon}")
    return AisPositionReport(mmsi=mmsi, timestamp=received_at, lat=lat, lon=lon,
                             sog=sog, cog=cog, heading=heading)


_SIXBIT = "@ABCDEFGHIJKLMNOPQRSTUVWXYZ[\\]^_ !\"#$%&'()*+,-./0123456789:;<=>?"


def _decode_sixbit(bits: str, start: int, length: int) -> str:
    chars = []
    for i in range(start, start + length, 6):
        chars.append(_SIXBIT[_uint(bits, i, 6)])
    return "".join(chars).rstrip("@ ")


def decode_static_report(bits: str) -> AisStaticReport:
    """Decode a type 5 static-and-voyage report (name, callsign, ship type)."""
    mtype = message_type(bits)
    if mtype != 5:
        raise UnsupportedMessageType(f"not a static report: type {mtype}")
    if len(bits) < 420:
        raise TruncatedPayload(f"static report needs >=420 bits, got {len(bits)}")
    mmsi = _uint(bits, 8, 30)
    if mmsi <= 0:
        raise MalformedField("mmsi must be positive")
    callsign = _decode_sixbit(bits, 70, 42)
    name = _decode_sixbit(bits, 112, 120)
    ship_type = _uint(bits, 232, 8)
    return AisStaticReport(mmsi=mmsi, vessel_name=name, ship_type=ship_type,
                           callsign=callsign)


@dataclass
class DecoderStats:
    sentences: int = 0
    checksum_failures: int = 0
    malformed: int = 0
    unsupported_types: int = 0


class AisDecoder:
    """Line-in, report-out decoder for one AIVDM stream (one assembler per stream)."""

    def __init__(self, fragment_timeout_s: float = 30.0):
        self.assembler = FragmentAssembler(fragment_timeout_s)
        self.stats = DecoderStats()

    def feed_line(self, line: str, received_at: float):
        """Decode one sentence line; yields position/static reports."""
        if not line.strip():
            return
        self.stats.sentences += 1
        try:
            sentence = parse_sentence(line)
        except ChecksumMismatch:
            self.stats.checksum_failures += 1
            return
        except MalformedField:
            self.stats.malformed += 1
            return
        try:
            payloads = self.assembler.add(sentence, received_at)
        except InvalidArmorCharacter:
            self.stats.malformed += 1
            return
        for bits in payloads:
            try:
                mtype = message_type(bits)
                if mtype in (1, 2, 3):
                    yield decode_position_report(bits, received_at)
                elif mtype == 5:
                    yield decode_static_report(bits)
                else:
                    self.stats.unsupported_types += 1
            except AisError:
                self.stats.malformed += 1
