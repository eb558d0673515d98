// Global test setup: canvas stub, media-element stubs, and a tripwire so
// nothing in the contract suite ever touches the network — everything must
// come from the recorded fixtures.

import { installFake2D } from "./fake2d";

installFake2D();

// jsdom throws "not implemented" for media playback; tests only care that
// a src was assigned
(HTMLMediaElement.prototype as any).play = () => Promise.resolve();
(HTMLMediaElement.prototype as any).pause = () => undefined;

(globalThis as any).fetch = () => {
  throw new Error("network disabled: contract tests run against fixtures only");
};
