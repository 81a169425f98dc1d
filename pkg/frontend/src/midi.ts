/** Minimal Standard MIDI File reader for the format-0 files the service
 * emits: enough to recover tempo, program, and timed notes for WebAudio
 * playback. Times come back in seconds. */

export interface MidiNote {
  startSec: number;
  durationSec: number;
  pitch: number;
  velocity: number;
}

export interface ParsedMidi {
  ticksPerQuarter: number;
  tempoUsPerQuarter: number;
  program: number;
  notes: MidiNote[];
  totalSec: number;
}

class Reader {
  private pos = 0;
  constructor(private data: Uint8Array) {}

  get offset(): number {
    return this.pos;
  }

  seek(pos: number): void {
    this.pos = pos;
  }

  u8(): number {
    if (this.pos >= this.data.length) throw new Error("unexpected end of MIDI data");
    return this.data[this.pos++];
  }

  u16(): number {
    return (this.u8() << 8) | this.u8();
  }

  u32(): number {
    return ((this.u8() << 24) | (this.u8() << 16) | (this.u8() << 8) | this.u8()) >>> 0;
  }

  bytes(n: number): Uint8Array {
    const out = this.data.slice(this.pos, this.pos + n);
    this.pos += n;
    return out;
  }

  variableLength(): number {
    let value = 0;
    for (;;) {
      const byte = this.u8();
      value = (value << 7) | (byte & 0x7f);
      if (!(byte & 0x80)) return value;
    }
  }
}

interface TickNote {
  startTick: number;
  endTick: number;
  pitch: number;
  velocity: number;
}

const ascii = (bytes: Uint8Array) => String.fromCharCode(...bytes);

export function parseMidi(data: Uint8Array): ParsedMidi {
  const reader = new Reader(data);
  if (ascii(reader.bytes(4)) !== "MThd") throw new Error("not a MIDI file");
  const headerLength = reader.u32();
  const format = reader.u16();
  const trackCount = reader.u16();
  const division = reader.u16();
  reader.seek(8 + headerLength);
  if (format > 1) throw new Error(`unsupported MIDI format ${format}`);
  if (division & 0x8000) throw new Error("SMPTE time division is unsupported");

  let tempo = 500_000; // MIDI default, 120 BPM
  let program = 0;
  const tickNotes: TickNote[] = [];
  let endTick = 0;

  for (let t = 0; t < trackCount; t++) {
    if (ascii(reader.bytes(4)) !== "MTrk") throw new Error("missing track chunk");
    const length = reader.u32();
    const trackEnd = reader.offset + length;
    const pending = new Map<number, { tick: number; velocity: number }>();
    let tick = 0;
    let runningStatus = 0;
    while (reader.offset < trackEnd) {
      tick += reader.variableLength();
      let status = reader.u8();
      if (!(status & 0x80)) {
        // Running status: the byte we read was data; reuse the last status.
        if (!runningStatus) throw new Error("dangling data byte");
        reader.seek(reader.offset - 1);
        status = runningStatus;
      }
      if (status === 0xff) {
        const kind = reader.u8();
        const body = reader.bytes(reader.variableLength());
        if (kind === 0x51 && body.length === 3) {
          tempo = (body[0] << 16) | (body[1] << 8) | body[2];
        }
      } else if (status === 0xf0 || status === 0xf7) {
        reader.bytes(reader.variableLength());
      } else {
        runningStatus = status;
        const type = status & 0xf0;
        if (type === 0xc0 || type === 0xd0) {
          const value = reader.u8();
          if (type === 0xc0) program = value;
        } else {
          const a = reader.u8();
          const b = reader.u8();
          if (type === 0x90 && b > 0) {
            pending.set(a, { tick, velocity: b });
          } else if (type === 0x80 || (type === 0x90 && b === 0)) {
            const start = pending.get(a);
            if (start) {
              pending.delete(a);
              tickNotes.push({
                startTick: start.tick,
                endTick: tick,
                pitch: a,
                velocity: start.velocity,
              });
            }
          }
        }
      }
      endTick = Math.max(endTick, tick);
    }
    reader.seek(trackEnd);
  }

  const secondsPerTick = tempo / 1_000_000 / division;
  const notes = tickNotes
    .map((n) => ({
      startSec: n.startTick * secondsPerTick,
      durationSec: (n.endTick - n.startTick) * secondsPerTick,
      pitch: n.pitch,
      velocity: n.velocity,
    }))
    .sort((a, b) => a.startSec - b.startSec);
  return {
    ticksPerQuarter: division,
    tempoUsPerQuarter: tempo,
    program,
    notes,
    totalSec: endTick * secondsPerTick,
  };
}
