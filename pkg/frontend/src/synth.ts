/** WebAudio playback of a parsed MIDI file with switchable timbres.
 * Pause suspends the audio clock, so resuming continues exactly where the
 * music stopped. The instrument choice takes effect on the next play. */

import { midiToHz, timbreForProgram } from "./instruments";
import type { ParsedMidi } from "./midi";

export type PlayerState = "idle" | "playing" | "paused" | "done";

export class MidiPlayer {
  private context: AudioContext | null = null;
  private stopTimer: number | null = null;
  private _state: PlayerState = "idle";
  onStateChange: (state: PlayerState) => void = () => {};

  constructor(private available = typeof AudioContext !== "undefined") {}

  get supported(): boolean {
    return this.available;
  }

  get state(): PlayerState {
    return this._state;
  }

  private setState(state: PlayerState): void {
    this._state = state;
    this.onStateChange(state);
  }

  async play(midi: ParsedMidi, program: number): Promise<void> {
    if (!this.available) throw new Error("audio is not available in this browser");
    if (this._state === "paused" && this.context) {
      await this.context.resume();
      this.setState("playing");
      return;
    }
    await this.stop();
    const context = new AudioContext();
    this.context = context;
    const timbre = timbreForProgram(program);
    const master = context.createGain();
    master.gain.value = 0.6;
    master.connect(context.destination);
    const startAt = context.currentTime + 0.05;
    for (const note of midi.notes) {
      const begin = startAt + note.startSec;
      const end = begin + Math.max(0.05, note.durationSec);
      const osc = context.createOscillator();
      osc.type = timbre.wave;
      osc.frequency.value = midiToHz(note.pitch);
      const filter = context.createBiquadFilter();
      filter.type = "lowpass";
      filter.frequency.value = Math.min(12000, midiToHz(note.pitch) * timbre.filterFactor);
      const gain = context.createGain();
      const peak = (note.velocity / 127) * 0.5;
      gain.gain.setValueAtTime(0, begin);
      gain.gain.linearRampToValueAtTime(peak, begin + timbre.attackSec);
      gain.gain.exponentialRampToValueAtTime(
        Math.max(0.001, peak * timbre.sustainLevel),
        Math.max(begin + timbre.attackSec + 0.001, end - timbre.releaseSec)
      );
      gain.gain.linearRampToValueAtTime(0, end);
      osc.connect(filter);
      filter.connect(gain);
      gain.connect(master);
      osc.start(begin);
      osc.stop(end + 0.05);
    }
    this.setState("playing");
    const total = (startAt - context.currentTime + midi.totalSec + 0.3) * 1000;
    this.stopTimer = window.setTimeout(() => {
      void this.stop("done");
    }, total);
  }

  async pause(): Promise<void> {
    if (this.context && this._state === "playing") {
      await this.context.suspend();
      this.setState("paused");
    }
  }

  async stop(finalState: PlayerState = "idle"): Promise<void> {
    if (this.stopTimer !== null) {
      window.clearTimeout(this.stopTimer);
      this.stopTimer = null;
    }
    if (this.context) {
      const context = this.context;
      this.context = null;
      try {
        await context.close();
      } catch {
        /* already closed */
      }
    }
    this.setState(finalState);
  }
}
