import { describe, expect, it } from "vitest";

import { parseMidi } from "./midi";

/** Hand-assembled format-0 file, independent of the service: tempo 100 BPM,
 * program 24, one quarter note C4 at t=0 and one half note E4 after a
 * quarter rest. 480 ticks per quarter. */
function fixture(): Uint8Array {
  const track: number[] = [
    0x00, 0xff, 0x51, 0x03, 0x09, 0x27, 0xc0, // tempo 600000 us (100 BPM)
    0x00, 0xc0, 24,                           // program change
    0x00, 0x90, 60, 96,                       // C4 on, velocity 96
    0x83, 0x60, 0x80, 60, 0,                  // +480 ticks, C4 off
    0x83, 0x60, 0x90, 64, 80,                 // +480 (rest), E4 on
    0x87, 0x40, 0x80, 64, 0,                  // +960, E4 off
    0x00, 0xff, 0x2f, 0x00,                   // end of track
  ];
  const header = [
    0x4d, 0x54, 0x68, 0x64, 0, 0, 0, 6, 0, 0, 0, 1, 0x01, 0xe0,
  ];
  const trackHeader = [
    0x4d, 0x54, 0x72, 0x6b,
    (track.length >>> 24) & 0xff, (track.length >>> 16) & 0xff,
    (track.length >>> 8) & 0xff, track.length & 0xff,
  ];
  return new Uint8Array([...header, ...trackHeader, ...track]);
}

describe("parseMidi", () => {
  it("reads header, tempo, and program", () => {
    const midi = parseMidi(fixture());
    expect(midi.ticksPerQuarter).toBe(480);
    expect(midi.tempoUsPerQuarter).toBe(600000);
    expect(midi.program).toBe(24);
  });

  it("recovers note timing in seconds", () => {
    const midi = parseMidi(fixture());
    expect(midi.notes).toHaveLength(2);
    const [first, second] = midi.notes;
    expect(first.pitch).toBe(60);
    expect(first.velocity).toBe(96);
    expect(first.startSec).toBeCloseTo(0, 9);
    expect(first.durationSec).toBeCloseTo(0.6, 9); // one quarter at 100 BPM
    expect(second.pitch).toBe(64);
    expect(second.startSec).toBeCloseTo(1.2, 9);   // after a quarter rest
    expect(second.durationSec).toBeCloseTo(1.2, 9); // half note
  });

  it("computes the total length including trailing deltas", () => {
    const midi = parseMidi(fixture());
    expect(midi.totalSec).toBeCloseTo(2.4, 9);
  });

  it("rejects non-MIDI data", () => {
    expect(() => parseMidi(new Uint8Array([1, 2, 3, 4]))).toThrow(/not a MIDI file/);
  });

  it("handles running status", () => {
    // Two notes written with running status after the first note-on.
    const track = [
      0x00, 0x90, 60, 64,
      0x60, 60, 0, // running status: note-on velocity 0 = note-off
      0x00, 60, 64,
      0x60, 60, 0,
      0x00, 0xff, 0x2f, 0x00,
    ];
    const bytes = new Uint8Array([
      0x4d, 0x54, 0x68, 0x64, 0, 0, 0, 6, 0, 0, 0, 1, 0x00, 0x60,
      0x4d, 0x54, 0x72, 0x6b, 0, 0, 0, track.length, ...track,
    ]);
    const midi = parseMidi(bytes);
    expect(midi.notes).toHaveLength(2);
  });
});
