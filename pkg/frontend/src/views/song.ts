/** Song view: rendered sheet, playback controls, metrics, and rating. */

import { api, ApiError } from "../api";
import { clear, el, starWidget } from "../dom";
import { PLAYBACK_INSTRUMENTS } from "../instruments";
import { parseMidi, type ParsedMidi } from "../midi";
import { renderSheet } from "../sheet";
import { MidiPlayer } from "../synth";
import type { SongRecord } from "../types";

const player = new MidiPlayer();

function metricsTable(record: SongRecord): HTMLElement {
  const rows: Array<[string, string]> = [];
  const report = record.report ?? {};
  const formats: Array<[keyof typeof report, string]> = [
    ["best_key", "Detected key"],
    ["key_confidence", "Key confidence"],
    ["average_interval", "Average interval"],
    ["step_ratio", "Step ratio"],
    ["direction_change_rate", "Direction changes"],
  ];
  for (const [field, label] of formats) {
    const value = report[field];
    if (value === undefined) continue;
    rows.push([label, typeof value === "number" ? value.toFixed(3) : String(value)]);
  }
  const table = el("table", { class: "metrics" });
  for (const [label, value] of rows) {
    table.appendChild(el("tr", {}, [el("th", {}, [label]), el("td", {}, [value])]));
  }
  return table;
}

export async function renderSongView(root: HTMLElement, id: string): Promise<void> {
  clear(root);
  root.appendChild(el("p", {}, ["Loading song…"]));
  let record: SongRecord;
  try {
    record = await api.getSong(id);
  } catch (err) {
    clear(root);
    const detail = err instanceof ApiError ? err.message : String(err);
    root.appendChild(el("p", { class: "error" }, [`Could not load song: ${detail}`]));
    return;
  }
  clear(root);

  const header = el("div", { class: "row spread" }, [
    el("h2", {}, [record.title]),
    el("a", { href: "#/history" }, ["← History"]),
  ]);
  const facts = el("p", { class: "facts" }, [
    `${record.key} · ${record.time_signature} · seed ${record.seed} · ` +
      `${record.output === "song" ? "lyrical song" : "non-lyrical music"}`,
  ]);

  const instrumentSelect = el("select", { title: "Playback instrument" });
  for (const { program, name } of PLAYBACK_INSTRUMENTS) {
    const option = el("option", { value: String(program) }, [name]);
    if (program === record.instrument) option.setAttribute("selected", "");
    instrumentSelect.appendChild(option);
  }
  const playButton = el("button", { class: "primary" }, ["Play"]);
  const pauseButton = el("button", { disabled: "" }, ["Pause"]);
  const stopButton = el("button", { disabled: "" }, ["Stop"]);
  const controls = el("div", { class: "row" }, [
    playButton, pauseButton, stopButton,
    el("label", {}, ["Instrument ", instrumentSelect]),
    el("a", { href: record.links.midi, download: `${record.title}.mid` }, ["Download MIDI"]),
    el("a", { href: record.links.musicxml, download: `${record.title}.musicxml` }, [
      "Download MusicXML",
    ]),
  ]);

  let midi: ParsedMidi | null = null;
  if (!player.supported) {
    for (const button of [playButton, pauseButton, stopButton]) {
      button.setAttribute("disabled", "");
    }
    controls.appendChild(el("span", { class: "error" }, ["Audio is unavailable here."]));
  }
  player.onStateChange = (state) => {
    playButton.toggleAttribute("disabled", state === "playing");
    pauseButton.toggleAttribute("disabled", state !== "playing");
    stopButton.toggleAttribute("disabled", state === "idle" || state === "done");
    playButton.textContent = state === "paused" ? "Resume" : "Play";
  };
  playButton.addEventListener("click", async () => {
    try {
      if (player.state !== "paused") {
        if (midi === null) {
          midi = parseMidi(await api.fetchBytes(record.links.midi));
        }
        await player.play(midi, Number((instrumentSelect as HTMLSelectElement).value));
      } else {
        await player.play(midi!, Number((instrumentSelect as HTMLSelectElement).value));
      }
    } catch (err) {
      controls.appendChild(el("span", { class: "error" }, [String(err)]));
    }
  });
  instrumentSelect.addEventListener("change", () => {
    // A new timbre applies from the next (re)start of playback.
    void player.stop();
  });
  pauseButton.addEventListener("click", () => void player.pause());
  stopButton.addEventListener("click", () => void player.stop());

  const ratingRow = el("div", { class: "row" }, [el("span", {}, ["Your rating: "])]);
  const mountStars = (rating: number | null) => {
    while (ratingRow.children.length > 1) ratingRow.lastChild?.remove();
    ratingRow.appendChild(
      starWidget(rating, async (stars) => {
        mountStars(stars); // optimistic
        try {
          const updated = await api.rate(record.id, stars);
          mountStars(updated.rating);
        } catch {
          mountStars(record.rating); // roll back
        }
      })
    );
  };
  mountStars(record.rating);

  const sheetBox = el("div", { class: "sheet" });
  root.append(header, facts, controls, ratingRow, metricsTable(record), sheetBox);
  const xml = await api.fetchText(record.links.musicxml);
  await renderSheet(sheetBox, xml, record.links.musicxml);
}
