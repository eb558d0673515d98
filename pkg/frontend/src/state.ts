// Small shared-state helpers: the view-state record and the request gate
// that keeps slow responses from clobbering newer ones.

import type { FrameKey } from "./types";

export interface ViewState {
  activeLens: string;
  hoverNode: FrameKey | null;
  selectedNode: FrameKey | null;
  /** video ids ticked in the route planner */
  selectedClips: Set<string>;
  prompt: string;
}

export function initialState(lens: string): ViewState {
  return {
    activeLens: lens,
    hoverNode: null,
    selectedNode: null,
    selectedClips: new Set(),
    prompt: "",
  };
}

/**
 * Monotonic request generation counter. Take a ticket before firing a
 * fetch; when the response lands, only apply it if the ticket is still
 * current. Anything that resolves after a newer request started is stale
 * and gets dropped on the floor.
 */
export class Gate {
  private gen = 0;

  next(): number {
    return ++this.gen;
  }

  isCurrent(ticket: number): boolean {
    return ticket === this.gen;
  }
}
