/** Playback instruments offered in the UI, keyed by General MIDI program. */

export interface PlaybackInstrument {
  program: number;
  name: string;
}

export const PLAYBACK_INSTRUMENTS: PlaybackInstrument[] = [
  { program: 0, name: "Piano" },
  { program: 10, name: "Music Box" },
  { program: 24, name: "Guitar" },
  { program: 40, name: "Violin" },
  { program: 73, name: "Flute" },
];

export interface Timbre {
  wave: OscillatorType;
  attackSec: number;
  releaseSec: number;
  /** Portion of the note during which the tone sustains before release. */
  sustainLevel: number;
  /** Simple brightness control via a lowpass at pitch * factor. */
  filterFactor: number;
}

const TIMBRES: Array<[number, number, Timbre]> = [
  // [loProgram, hiProgram, timbre]
  [0, 7, { wave: "triangle", attackSec: 0.005, releaseSec: 0.25, sustainLevel: 0.35, filterFactor: 6 }],
  [8, 15, { wave: "sine", attackSec: 0.002, releaseSec: 0.4, sustainLevel: 0.15, filterFactor: 9 }],
  [24, 31, { wave: "sawtooth", attackSec: 0.004, releaseSec: 0.2, sustainLevel: 0.3, filterFactor: 4 }],
  [40, 47, { wave: "sawtooth", attackSec: 0.08, releaseSec: 0.15, sustainLevel: 0.85, filterFactor: 5 }],
  [56, 63, { wave: "square", attackSec: 0.05, releaseSec: 0.1, sustainLevel: 0.8, filterFactor: 3 }],
  [72, 79, { wave: "sine", attackSec: 0.06, releaseSec: 0.12, sustainLevel: 0.9, filterFactor: 8 }],
];

const DEFAULT_TIMBRE: Timbre = {
  wave: "triangle",
  attackSec: 0.01,
  releaseSec: 0.2,
  sustainLevel: 0.5,
  filterFactor: 6,
};

export function timbreForProgram(program: number): Timbre {
  for (const [lo, hi, timbre] of TIMBRES) {
    if (program >= lo && program <= hi) return timbre;
  }
  return DEFAULT_TIMBRE;
}

export function midiToHz(pitch: number): number {
  return 440 * Math.pow(2, (pitch - 69) / 12);
}
