/** Sheet rendering via OpenSheetMusicDisplay, with a download-link fallback
 * when the engraver rejects the document. */

import { OpenSheetMusicDisplay } from "opensheetmusicdisplay";

export async function renderSheet(
  container: HTMLElement,
  musicxml: string,
  fallbackHref: string
): Promise<boolean> {
  container.innerHTML = "";
  try {
    const osmd = new OpenSheetMusicDisplay(container, {
      autoResize: false,
      drawTitle: true,
      drawMeasureNumbers: true,
      backend: "svg",
    });
    await osmd.load(musicxml);
    osmd.render();
    return true;
  } catch (err) {
    console.error("sheet rendering failed", err);
    container.innerHTML = "";
    const message = document.createElement("p");
    message.className = "error";
    message.textContent = "Sheet rendering failed. ";
    const link = document.createElement("a");
    link.href = fallbackHref;
    link.textContent = "Download the MusicXML instead.";
    link.download = "score.musicxml";
    message.appendChild(link);
    container.appendChild(message);
    return false;
  }
}
