/** Browser shell: form controls, delegated clicks, banner, overlays. */

import { ServiceClient } from "./client.js";
import { parseKey } from "./geometry.js";
import { UiSession } from "./session.js";
import { renderBanner } from "./view.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function num(id: string): number {
  return Number((el<HTMLInputElement>(id)).value);
}

function str(id: string): string {
  return (el<HTMLSelectElement>(id)).value;
}

function main(): void {
  const base = `${window.location.protocol}//${window.location.hostname}:8080`;
  const client = new ServiceClient(base);
  let session = new UiSession(client);
  const board = el<HTMLDivElement>("board");
  const banner = el<HTMLDivElement>("banner");

  const paint = (): void => {
    banner.textContent = renderBanner(session.latest());
    board.innerHTML = session.svg();
  };

  const guard = (work: Promise<unknown>): void => {
    work
      .then(() => paint())
      .catch((exc: unknown) => {
        banner.textContent = `error: ${exc instanceof Error ? exc.message : exc}`;
      });
  };

  el<HTMLButtonElement>("new-game").addEventListener("click", () => {
    session = new UiSession(client, {
      showDual: el<HTMLInputElement>("show-dual").checked,
    });
    guard(
      session.create({
        variant: str("variant"),
        m: num("m"),
        n: num("n"),
        p: num("p"),
        q: num("q"),
        humanRole: str("role"),
        engine: str("engine"),
        seed: num("seed"),
      }),
    );
  });

  el<HTMLInputElement>("show-dual").addEventListener("change", (ev) => {
    session.setDualOverlay((ev.target as HTMLInputElement).checked);
    try {
      paint();
    } catch {
      /* no game yet */
    }
  });

  board.addEventListener("click", (ev) => {
    const target = (ev.target as Element).closest("[data-hit]");
    if (!target) return;
    const key = target.getAttribute("data-hit");
    if (!key) return;
    guard(session.clickEdge(parseKey(key)));
  });
}

main();
