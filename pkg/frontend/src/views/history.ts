/** History view: paginated reverse-chronological list with inline ratings.
 * The last successful listing is cached so an outage still shows history
 * behind an error banner. */

import { api, ApiError } from "../api";
import { clear, el, starWidget } from "../dom";
import type { SongListing } from "../types";

const PAGE_SIZE = 10;
const CACHE_KEY = "melodist.history.cache";

function readCache(): SongListing | null {
  try {
    const raw = localStorage.getItem(CACHE_KEY);
    return raw ? (JSON.parse(raw) as SongListing) : null;
  } catch {
    return null;
  }
}

function writeCache(listing: SongListing): void {
  try {
    localStorage.setItem(CACHE_KEY, JSON.stringify(listing));
  } catch {
    /* storage full or disabled */
  }
}

export async function renderHistoryView(root: HTMLElement, page = 0): Promise<void> {
  clear(root);
  root.appendChild(el("h2", {}, ["Music history"]));
  const banner = el("p", { class: "error hidden" });
  const listBox = el("div", { class: "history" });
  root.append(banner, listBox);

  let listing: SongListing | null = null;
  try {
    listing = await api.listSongs(PAGE_SIZE, page * PAGE_SIZE);
    writeCache(listing);
  } catch (err) {
    const detail = err instanceof ApiError ? err.message : String(err);
    banner.textContent = `Could not reach the service: ${detail}`;
    banner.classList.remove("hidden");
    listing = readCache();
    if (listing === null) {
      listBox.appendChild(el("p", {}, ["No cached history available."]));
      return;
    }
    listBox.appendChild(el("p", { class: "muted" }, ["Showing cached history."]));
  }

  if (listing.total === 0) {
    listBox.appendChild(
      el("p", { class: "muted" }, [
        "Nothing here yet. Compose your first melody from the Generate tab.",
      ])
    );
    return;
  }

  for (const record of listing.items) {
    const excerpt =
      record.lyrics.length > 80 ? record.lyrics.slice(0, 77) + "…" : record.lyrics;
    const row = el("div", { class: "card" }, [
      el("div", { class: "row spread" }, [
        el("a", { href: `#/songs/${record.id}`, class: "title" }, [record.title]),
        el("span", { class: "muted" }, [new Date(record.created_at).toLocaleString()]),
      ]),
      el("p", { class: "muted" }, [excerpt]),
      el("div", { class: "row spread" }, [
        el("span", {}, [`${record.key} · ${record.time_signature} · seed ${record.seed}`]),
      ]),
    ]);
    const stars = el("span");
    const mount = (rating: number | null) => {
      stars.innerHTML = "";
      stars.appendChild(
        starWidget(rating, async (value) => {
          mount(value);
          try {
            const updated = await api.rate(record.id, value);
            mount(updated.rating);
          } catch {
            mount(record.rating);
          }
        })
      );
    };
    mount(record.rating);
    row.lastChild?.appendChild(stars);
    listBox.appendChild(row);
  }

  const pages = Math.ceil(listing.total / PAGE_SIZE);
  if (pages > 1) {
    const nav = el("div", { class: "row" });
    for (let p = 0; p < pages; p++) {
      const button = el("button", p === page ? { class: "current" } : {}, [String(p + 1)]);
      button.addEventListener("click", () => void renderHistoryView(root, p));
      nav.appendChild(button);
    }
    listBox.appendChild(nav);
  }
}
