/** Composition form: lyrics or image in, navigation to the song view out.
 * Entered lyrics survive failures; the submit button deduplicates while a
 * request is in flight. */

import { api, ApiError } from "../api";
import { el, clear, KEY_CHOICES } from "../dom";
import { PLAYBACK_INSTRUMENTS } from "../instruments";
import type { GenerateRequest } from "../types";

function fileToBase64(file: File): Promise<string> {
  return new Promise((resolve, reject) => {
    const reader = new FileReader();
    reader.onload = () => {
      const url = reader.result as string;
      resolve(url.slice(url.indexOf(",") + 1));
    };
    reader.onerror = () => reject(reader.error);
    reader.readAsDataURL(file);
  });
}

export function renderGenerateView(root: HTMLElement): void {
  clear(root);
  const error = el("p", { class: "error hidden" });
  const lyricsInput = el("textarea", {
    rows: "8",
    placeholder: "Type or paste lyrics, one phrase per line…",
  });
  const imageInput = el("input", { type: "file", accept: "image/png,image/jpeg" });
  const modeLyrics = el("input", { type: "radio", name: "mode", checked: "" });
  const modeImage = el("input", { type: "radio", name: "mode" });

  const keySelect = el("select");
  for (const key of KEY_CHOICES) {
    keySelect.appendChild(el("option", { value: key }, [key]));
  }
  const outputSelect = el("select", {}, [
    el("option", { value: "song" }, ["Lyrical song"]),
    el("option", { value: "music" }, ["Non-lyrical music"]),
  ]);
  const instrumentSelect = el("select");
  for (const { program, name } of PLAYBACK_INSTRUMENTS) {
    instrumentSelect.appendChild(el("option", { value: String(program) }, [name]));
  }
  const lengthSelect = el("select", {}, [
    el("option", { value: "short" }, ["Short (4 phrases)"]),
    el("option", { value: "medium", selected: "" }, ["Medium (8 phrases)"]),
    el("option", { value: "long" }, ["Long (12 phrases)"]),
  ]);
  const seedInput = el("input", {
    type: "number",
    min: "0",
    placeholder: "random",
    title: "Seed for reproducible generation",
  });
  const submit = el("button", { class: "primary" }, ["Compose"]);

  const showError = (message: string) => {
    error.textContent = message;
    error.classList.remove("hidden");
  };

  submit.addEventListener("click", async () => {
    error.classList.add("hidden");
    const useImage = (modeImage as HTMLInputElement).checked;
    const request: GenerateRequest = {
      key: (keySelect as HTMLSelectElement).value,
      output: (outputSelect as HTMLSelectElement).value as "song" | "music",
      instrument: Number((instrumentSelect as HTMLSelectElement).value),
    };
    const seedText = (seedInput as HTMLInputElement).value.trim();
    if (seedText) request.seed = Number(seedText);
    if (useImage) {
      const file = (imageInput as HTMLInputElement).files?.[0];
      if (!file) {
        showError("Choose a PNG or JPEG image first.");
        return;
      }
      request.image_base64 = await fileToBase64(file);
      request.length_preference = (lengthSelect as HTMLSelectElement).value as
        | "short" | "medium" | "long";
    } else {
      const lyrics = (lyricsInput as HTMLTextAreaElement).value;
      if (!lyrics.trim()) {
        showError("Enter some lyrics first.");
        return;
      }
      request.lyrics = lyrics;
    }
    submit.setAttribute("disabled", "");
    submit.textContent = "Composing…";
    try {
      const record = await api.generate(request);
      window.location.hash = `#/songs/${record.id}`;
    } catch (err) {
      const detail = err instanceof ApiError ? err.message : String(err);
      showError(`Generation failed: ${detail}`);
    } finally {
      submit.removeAttribute("disabled");
      submit.textContent = "Compose";
    }
  });

  const modeRow = el("div", { class: "row" }, [
    el("label", {}, [modeLyrics, " Lyrics"]),
    el("label", {}, [modeImage, " Image"]),
  ]);
  const imageRow = el("div", { class: "row hidden" }, [
    el("label", {}, ["Image file ", imageInput]),
    el("label", {}, ["Length ", lengthSelect]),
  ]);
  const lyricsRow = el("div", { class: "row" }, [lyricsInput]);
  const syncMode = () => {
    const useImage = (modeImage as HTMLInputElement).checked;
    imageRow.classList.toggle("hidden", !useImage);
    lyricsRow.classList.toggle("hidden", useImage);
  };
  modeLyrics.addEventListener("change", syncMode);
  modeImage.addEventListener("change", syncMode);

  root.append(
    el("h2", {}, ["Compose a melody"]),
    modeRow,
    lyricsRow,
    imageRow,
    el("div", { class: "row" }, [
      el("label", {}, ["Key ", keySelect]),
      el("label", {}, ["Output ", outputSelect]),
      el("label", {}, ["Instrument ", instrumentSelect]),
      el("label", {}, ["Seed ", seedInput]),
    ]),
    el("div", { class: "row" }, [submit]),
    error
  );
}
