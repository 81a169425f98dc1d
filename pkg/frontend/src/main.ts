/** Single-page app shell with hash routing:
 *  #/           composition form
 *  #/songs/:id  rendered song with playback and rating
 *  #/history    paginated generation history
 */

import "./style.css";
import { el } from "./dom";
import { renderGenerateView } from "./views/generate";
import { renderHistoryView } from "./views/history";
import { renderSongView } from "./views/song";

function layout(): HTMLElement {
  const app = document.getElementById("app")!;
  app.innerHTML = "";
  const nav = el("nav", {}, [
    el("a", { href: "#/", class: "brand" }, ["melodist"]),
    el("a", { href: "#/" }, ["Generate"]),
    el("a", { href: "#/history" }, ["History"]),
  ]);
  const main = el("main");
  app.append(nav, main);
  return main;
}

function route(): void {
  const main = layout();
  const hash = window.location.hash || "#/";
  const songMatch = hash.match(/^#\/songs\/([0-9a-f-]+)$/i);
  if (songMatch) {
    void renderSongView(main, songMatch[1]);
  } else if (hash.startsWith("#/history")) {
    void renderHistoryView(main);
  } else {
    renderGenerateView(main);
  }
}

window.addEventListener("hashchange", route);
window.addEventListener("DOMContentLoaded", route);
